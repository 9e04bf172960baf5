r"""
Parameter sweep through the command line
========================================

Runs ``dcemotion sweep`` over lambda0 and reads the CSV back.  The net
momentum flips sign with lambda0.  Running the same command twice gives
byte-identical files.
"""

from pathlib import Path

from dcemotion import cli
from dcemotion.output import read_csv

out = Path(__file__).parent / "out" / "sweep"
code = cli.main(["sweep", "--out", str(out), "--sweep.values", "-0.75,-0.25,0.25,0.75",
                 "--sweep.forces", "false", "--pulse.width", "2"])
print("exit code", code)
for path in sorted(out.glob("*.csv")):
    table = read_csv(path)
    print(path.name, list(table))
    for lam, q, v, st in zip(table["lambda0"], table["quantity"], table["value"],
                             table["status"]):
        if q == "P_net":
            print(f"    lambda0={lam:+.2f}  P_net={v:+.6e}  {st}")
