#!/usr/bin/env python3
"""Regenerates src/conway_table.cpp from the Conway polynomial database
shipped with the `galois` package (Frank Luebeck's tables)."""
import sys

import galois

MAX_ELEMENTS = 1 << 24
PRIMES = (2, 3, 5, 7, 11)


def main(out_path):
    rows = []
    for p in PRIMES:
        n = 1
        while p**n <= MAX_ELEMENTS:
            poly = galois.conway_poly(p, n)
            # galois returns coefficients highest degree first.
            coeffs = [int(c) for c in reversed(poly.coeffs)]
            rows.append((p, n, coeffs))
            n += 1
    with open(out_path, "w") as f:
        f.write("// Generated by tools/gen_conway.py. Do not edit.\n\n")
        f.write('#include "conway_table.hpp"\n\n')
        f.write("namespace sbox::detail {\n\n")
        f.write("const std::vector<ConwayEntry>& conway_table() {\n")
        f.write("  static const std::vector<ConwayEntry> table = {\n")
        for p, n, coeffs in rows:
            body = ", ".join(str(c) for c in coeffs)
            f.write(f"      {{{p}, {n}, {{{body}}}}},\n")
        f.write("  };\n  return table;\n}\n\n}  // namespace sbox::detail\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/conway_table.cpp")
