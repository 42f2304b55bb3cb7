import { main } from "../cli";

process.exit(main("shift_profiles", process.argv.slice(2)));
