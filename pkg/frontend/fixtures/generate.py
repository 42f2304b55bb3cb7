#!/usr/bin/env python3
"""Produce the figure fixtures by driving the installed ratetip CLI.

Run from this directory after `pip install -e ../..`:

    python3 generate.py

Slowest part is the four eta scans (~2 minutes total on two cores).
"""

import json
import pathlib
import shutil
import subprocess
import sys

HERE = pathlib.Path(__file__).parent

# A confirmed weak-tracking rate of this build (shadowing for 29 returns).
R_CONNECTION = 0.899187849914


def cli(*args: str) -> None:
    print("+ ratetip", " ".join(args), flush=True)
    subprocess.run(["ratetip", *args], check=True)


def write_config(name: str, payload: dict) -> pathlib.Path:
    path = HERE / name
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def main() -> None:
    # 1. the saddle orbit: report + one period of the loop
    cli("upo", "find", "--out", str(HERE / "upo.json"),
        "--orbit-csv", str(HERE / "orbit.csv"))
    gamma = json.loads((HERE / "upo.json").read_text())["gamma"]

    # 2. long frozen-attractor run (constant shift at the future value),
    #    started on the orbit so the loop sits inside the cloud
    attractor_cfg = write_config(
        "config_attractor.json",
        {
            "shift": {"kind": "constant", "lambda_minus": 0.2},
            "rate": {"r": 1.0},
            "run": {"z_init": [gamma[0], gamma[0], gamma[1]], "t_start": -1.0, "T": 400.0},
        },
    )
    run_dir = HERE / "attractor_run"
    cli("simulate", "--config", str(attractor_cfg), "--out-dir", str(run_dir),
        "--sample-dt", "0.2", "--out", str(run_dir / "status.json"))
    shutil.copy(run_dir / "trajectory.csv", HERE / "attractor_trajectory.csv")
    shutil.copy(run_dir / "crossings.csv", HERE / "attractor_crossings.csv")

    # 3. the connection run at a confirmed critical rate, horizon past T = 150
    #    so the post-shift shadowing of the orbit is visible
    etop_cfg = write_config(
        "config_etop.json",
        {"rate": {"r": R_CONNECTION}, "run": {"z_init": [-0.007, 0.035, -0.035],
                                              "t_start": -30.0, "T": 190.0}},
    )
    run_dir = HERE / "etop_run"
    cli("simulate", "--config", str(etop_cfg), "--out-dir", str(run_dir),
        "--sample-dt", "0.1", "--out", str(run_dir / "status.json"))
    shutil.copy(run_dir / "trajectory.csv", HERE / "etop_trajectory.csv")
    shutil.copy(run_dir / "crossings.csv", HERE / "etop_crossings.csv")

    # 4. shift-profile curves over the ramp window, smooth and piecewise
    for kind, name in (("tanh", "shift_tanh.csv"), ("piecewise_linear", "shift_piecewise.csv")):
        cfg = write_config(
            f"config_shift_{kind}.json",
            {
                "shift": {"kind": kind, "lambda_minus": -0.2, "lambda_plus": 0.2, "delta": 0.001},
                "rate": {"r": 1.0},
                "run": {"z_init": "auto", "t_start": -30.0, "T": 30.0},
            },
        )
        run_dir = HERE / f"shift_run_{kind}"
        cli("simulate", "--config", str(cfg), "--out-dir", str(run_dir),
            "--sample-dt", "0.1", "--out", str(run_dir / "status.json"))
        shutil.copy(run_dir / "shift.csv", HERE / name)

    # 5. gap-function scans for the horizon ladder
    for T in (125, 135, 145, 155):
        cli("eta-scan", "--r-min", "0.88", "--r-max", "1.0", "--samples", "49",
            "--T", str(float(T)), "--out", str(HERE / f"scan_T{T}.csv"))

    print("fixtures written to", HERE)


if __name__ == "__main__":
    sys.exit(main())
