"""Run `tietz-spectra verify` on one parameter set per regime."""
import sys

from tietz_spectra.cli import main

RUNS = [
    ["--D", "10", "--r-e", "2", "--b-h", "1", "--c-h", "0.5"],
    ["--D", "10", "--r-e", "2", "--b-h", "1", "--c-h", "0.5", "--l", "2"],
    ["--D", "10", "--r-e", "2", "--b-h", "1", "--c-h", "0.5", "--l", "2", "--centrifugal", "exact"],
    ["--D", "10", "--r-e", "2", "--b-h", "1", "--c-h", "0.05"],
    ["--D", "10", "--r-e", "2", "--b-h", "1", "--c-h", "-0.3", "--r-max", "62"],
    ["--D", "25", "--r-e", "10", "--b-h", "1", "--c-h", "0"],
]

if __name__ == "__main__":
    worst = 0
    for argv in RUNS:
        print("$ tietz-spectra verify", " ".join(argv), flush=True)
        code = main(["verify", *argv])
        print(f"exit {code}\n", flush=True)
        worst = max(worst, code)
    sys.exit(worst)
