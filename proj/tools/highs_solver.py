#!/usr/bin/env python3
"""External LP solver hook: highs_solver.py MODEL.mps SOLUTION.txt

Point NSMAC_LP_SOLVER at this script to solve programs with HiGHS.
"""
import sys

import highspy


def main(argv):
    if len(argv) != 3:
        print("usage: highs_solver.py MODEL.mps SOLUTION.txt", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("presolve", "on")
    h.setOptionValue("solver", "ipm")
    if h.readModel(argv[1]) != highspy.HighsStatus.kOk:
        print("cannot read " + argv[1], file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    info = h.getInfo()
    words = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
    }
    word = words.get(status, "limit")
    with open(argv[2], "w") as out:
        out.write("%s %.17g %d\n" % (word, info.objective_function_value, info.simplex_iteration_count + info.ipm_iteration_count))
        if word == "optimal":
            for v in h.getSolution().col_value:
                out.write("%.17g\n" % v)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
