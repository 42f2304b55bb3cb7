import { main } from "../cli";

process.exit(main("attractor3d", process.argv.slice(2)));
