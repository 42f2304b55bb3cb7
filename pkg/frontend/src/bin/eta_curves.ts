import { main } from "../cli";

process.exit(main("eta_curves", process.argv.slice(2)));
