#!/usr/bin/env python3
"""Convert the gate-level Verilog benchmarks shipped in the circuitgraph wheel
(MIT licensed, https://pypi.org/project/circuitgraph/) into sequential .bench.

Two input flavours are handled:
  * ISCAS'89 netlists (sNNN.v) that instantiate `ff`/`fflopd` cells.
  * Full-scan ITC'99 netlists (bNN_Cg.v) where each flip-flop was cut into a
    pseudo input `<reg>_Q` and a pseudo output `<reg>_D`. The pairs are stitched
    back into D flip-flops so the result is the original sequential circuit.

Usage: import_circuitgraph.py <netlists-dir> <out-dir> name [name ...]
"""
import re
import sys
from pathlib import Path

PRIMS = {"and": "AND", "nand": "NAND", "or": "OR", "nor": "NOR",
         "xor": "XOR", "xnor": "XNOR", "not": "NOT", "buf": "BUFF"}


def port_list(text, kind):
    names = []
    for m in re.finditer(r"\b%s\b([^;]*);" % kind, text):
        names += [n.strip() for n in m.group(1).split(",") if n.strip()]
    return names


def convert(src: Path) -> str:
    text = src.read_text()
    top = re.search(r"\bmodule\b.*?\bendmodule\b", text, re.S).group(0)
    inputs = [n for n in port_list(top, "input") if n not in ("clk", "clock")]
    outputs = port_list(top, "output")

    gates = []   # (out, kind, fanins)
    dffs = []    # (q, d)
    consts = set()
    for m in re.finditer(r"^\s*(\w+)\s+(\S+)\s*\(([^;]*)\)\s*;", top, re.M):
        cell, _, args = m.groups()
        if cell in PRIMS:
            pins = [a.strip() for a in args.split(",")]
            gates.append((pins[0], PRIMS[cell], pins[1:]))
        elif cell in ("ff", "fflopd"):
            pins = dict(re.findall(r"\.(\w+)\s*\(\s*([^\s)]+)\s*\)", args))
            dffs.append((pins["Q"], pins["D"]))
    for m in re.finditer(r"^\s*assign\s+(\S+)\s*=\s*(\S+)\s*;", top, re.M):
        lhs, rhs = m.groups()
        if rhs in ("1'b0", "1'b1"):
            consts.add(rhs)
            rhs = "const0" if rhs == "1'b0" else "const1"
        gates.append((lhs, "BUFF", [rhs]))

    # Full-scan ITC'99: stitch <reg>_Q / <reg>_D back into flip-flops.
    q_ports = [n for n in inputs if n.endswith("_Q")]
    d_ports = {n[:-2] for n in outputs if n.endswith("_D")}
    if q_ports and all(q[:-2] in d_ports for q in q_ports):
        for q in q_ports:
            dffs.append((q, q[:-2] + "_D"))
        inputs = [n for n in inputs if not n.endswith("_Q")]
        outputs = [n for n in outputs if not n.endswith("_D")]

    lines = ["# %s: converted from circuitgraph %s" % (src.stem.replace("_Cg", ""), src.name),
             "# %d inputs, %d outputs, %d D-type flipflops, %d gates"
             % (len(inputs), len(outputs), len(dffs), len(gates) + 2 * bool(consts)),
             ""]
    lines += ["INPUT(%s)" % n for n in inputs]
    lines += [""] + ["OUTPUT(%s)" % n for n in outputs] + [""]
    lines += ["%s = DFF(%s)" % (q, d) for q, d in dffs] + [""]
    if consts:
        anchor = inputs[0]
        lines.append("const0_n = NOT(%s)" % anchor)
        lines.append("const0 = AND(%s, const0_n)" % anchor)
        if "1'b1" in consts:
            lines.append("const1 = NOT(const0)")
    lines += ["%s = %s(%s)" % (o, k, ", ".join(f)) for o, k, f in gates]
    return "\n".join(lines) + "\n"


def main():
    src_dir, out_dir = Path(sys.argv[1]), Path(sys.argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in sys.argv[3:]:
        src = src_dir / ("%s.v" % name)
        if not src.exists():
            src = src_dir / ("%s_Cg.v" % name)
        (out_dir / ("%s.bench" % name)).write_text(convert(src))


if __name__ == "__main__":
    main()
