import { main } from "../cli";

process.exit(main("return_map", process.argv.slice(2)));
