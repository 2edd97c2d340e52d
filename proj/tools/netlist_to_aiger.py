#!/usr/bin/env python3
"""Convert a flat gate-level Verilog netlist (and/nand/or/nor/not/buf gates and
simple assigns) into a binary AIGER file.

Used to regenerate tests/data/epfl/*.aig from the EPFL netlists shipped with
the `circuitgraph` Python package:

    pip download --no-deps circuitgraph
    python3 tools/netlist_to_aiger.py path/to/log2.v tests/data/epfl/log2.aig
"""
import re
import sys


def tokenize_statements(text):
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if stmt:
            yield stmt


def split_names(s):
    # escaped identifiers run up to the next whitespace
    names = []
    for part in re.findall(r"\\\S+|[^,\s()]+", s):
        if part not in (",",):
            names.append(part)
    return names


def parse(text):
    inputs, outputs, gates, aliases = [], [], {}, {}
    for stmt in tokenize_statements(text):
        head = stmt.split(" ", 1)[0]
        rest = stmt[len(head):].strip()
        if head in ("module", "endmodule", "wire"):
            if head == "endmodule" and rest:
                stmt = rest
                head = stmt.split(" ", 1)[0]
                rest = stmt[len(head):].strip()
            else:
                continue
        if head == "input":
            inputs += split_names(rest)
        elif head == "output":
            outputs += split_names(rest)
        elif head == "assign":
            lhs, rhs = [x.strip() for x in rest.split("=", 1)]
            aliases[lhs] = rhs
        elif head in ("and", "nand", "or", "nor", "not", "buf"):
            m = re.match(r"(\S+)?\s*\((.*)\)$", rest)
            pins = split_names(m.group(2))
            gates[pins[0]] = (head, pins[1:])
        else:
            raise ValueError("unsupported statement: " + stmt[:80])
    return inputs, outputs, gates, aliases


class Builder:
    def __init__(self, num_inputs):
        self.num_inputs = num_inputs
        self.ands = []
        self.strash = {}

    def AND(self, a, b):
        if a > b:
            a, b = b, a
        if a == 0:
            return 0
        if a == 1:
            return b
        if a == b:
            return a
        if a ^ 1 == b:
            return 0
        key = (a, b)
        if key not in self.strash:
            lit = 2 * (self.num_inputs + 1 + len(self.ands))
            self.ands.append((lit, b, a))
            self.strash[key] = lit
        return self.strash[key]

    def tree(self, lits):
        lits = list(lits)
        while len(lits) > 1:
            nxt = [self.AND(lits[i], lits[i + 1]) for i in range(0, len(lits) - 1, 2)]
            if len(lits) % 2:
                nxt.append(lits[-1])
            lits = nxt
        return lits[0] if lits else 1


def convert(text):
    inputs, outputs, gates, aliases = parse(text)
    b = Builder(len(inputs))
    lit = {name: 2 * (i + 1) for i, name in enumerate(inputs)}
    lit["1'b0"], lit["1'b1"] = 0, 1

    def resolve(root):
        stack = [root]
        while stack:
            n = stack[-1]
            if n in lit:
                stack.pop()
                continue
            if n in aliases:
                deps = [aliases[n]]
            elif n in gates:
                deps = gates[n][1]
            else:
                raise ValueError("undriven net " + n)
            missing = [d for d in deps if d not in lit]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if n in aliases:
                lit[n] = lit[aliases[n]]
                continue
            kind, ins = gates[n]
            vals = [lit[d] for d in ins]
            if kind in ("and", "nand"):
                v = b.tree(vals)
            elif kind in ("or", "nor"):
                v = b.tree(x ^ 1 for x in vals) ^ 1
            elif kind == "not":
                v = vals[0] ^ 1
            else:
                v = vals[0]
            if kind in ("nand", "nor"):
                v ^= 1
            lit[n] = v
        return lit[root]

    pos = [resolve(o) for o in outputs]
    return len(inputs), b.ands, pos


def encode_varint(x):
    out = bytearray()
    while x & ~0x7F:
        out.append((x & 0x7F) | 0x80)
        x >>= 7
    out.append(x)
    return bytes(out)


def write_aig(num_inputs, ands, pos):
    m = num_inputs + len(ands)
    out = bytearray(f"aig {m} {num_inputs} 0 {len(pos)} {len(ands)}\n".encode())
    for p in pos:
        out += f"{p}\n".encode()
    for lhs, rhs0, rhs1 in ands:
        out += encode_varint(lhs - rhs0) + encode_varint(rhs0 - rhs1)
    return bytes(out)


def main():
    if len(sys.argv) != 3:
        print(__doc__)
        return 1
    with open(sys.argv[1]) as f:
        text = f.read()
    n, ands, pos = convert(text)
    with open(sys.argv[2], "wb") as f:
        f.write(write_aig(n, ands, pos))
    print(f"{sys.argv[2]}: pis={n} pos={len(pos)} ands={len(ands)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
