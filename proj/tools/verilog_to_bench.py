#!/usr/bin/env python3
"""Convert gate-level structural Verilog (ISCAS'85 style) to BENCH.

Handles the subset emitted for the ISCAS'85 netlists shipped with the
circuitgraph package: input/output/wire declarations, primitive gate
instances (and/or/nand/nor/xor/xnor/not/buf) and `assign` statements
between nets or to 1'b0 / 1'b1.

    python3 tools/verilog_to_bench.py c432.v > c432.bench
"""

import re
import sys

PRIMS = {"and": "AND", "or": "OR", "nand": "NAND", "nor": "NOR",
         "xor": "XOR", "xnor": "XNOR", "not": "NOT", "buf": "BUF"}


def convert(text, name):
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    inputs, outputs, lines = [], [], []
    consts = []
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt or stmt.startswith("module") or stmt == "endmodule":
            continue
        stmt = stmt.replace("endmodule", "").strip()
        if not stmt:
            continue
        head, _, rest = stmt.partition(" ")
        if head == "input":
            inputs += [s.strip() for s in rest.split(",")]
        elif head == "output":
            outputs += [s.strip() for s in rest.split(",")]
        elif head == "wire":
            continue
        elif head == "assign":
            lhs, rhs = [s.strip() for s in rest.split("=")]
            if rhs in ("1'b0", "1'b1"):
                consts.append((lhs, rhs == "1'b1"))
            else:
                lines.append(f"{lhs} = BUF({rhs})")
        elif head in PRIMS:
            m = re.match(r"\S*\s*\((.*)\)", rest)
            pins = [p.strip() for p in m.group(1).split(",")]
            lines.append(f"{pins[0]} = {PRIMS[head]}({', '.join(pins[1:])})")
        else:
            raise ValueError(f"unsupported statement: {stmt}")
    anchor = inputs[0]
    for net, value in consts:
        lines.append(f"{net} = {'XNOR' if value else 'XOR'}({anchor}, {anchor})")
    out = [f"# {name}", f"# {len(inputs)} inputs", f"# {len(outputs)} outputs",
           f"# {len(lines)} gates", ""]
    out += [f"INPUT({i})" for i in inputs]
    out.append("")
    out += [f"OUTPUT({o})" for o in outputs]
    out.append("")
    out += lines
    return "\n".join(out) + "\n"


def main():
    path = sys.argv[1]
    name = re.sub(r"\.v$", "", path.split("/")[-1])
    with open(path) as f:
        sys.stdout.write(convert(f.read(), name))


if __name__ == "__main__":
    main()
