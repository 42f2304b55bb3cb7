import { main } from "../cli";

process.exit(main("etop_connection", process.argv.slice(2)));
