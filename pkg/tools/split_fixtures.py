"""Split the output of export_fixtures.g into bundled .grp files.

usage: python tools/split_fixtures.py EXPORT_OUTPUT [--oracle "GAP 4.15.1, smallgrp 1.5.4"] [--date 2026-10-15]
"""

import argparse
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "mixedsurf" / "data" / "groups"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("export")
    ap.add_argument("--oracle", default="GAP 4.15.1, smallgrp 1.5.4")
    ap.add_argument("--date", default="2026-10-15")
    args = ap.parse_args()
    current = None
    subs = []
    for line in Path(args.export).read_text().splitlines():
        if line.startswith("@group"):
            _, n, i = line.split()
            current = OUT / f"sg{n}_{i}.grp"
            current.write_text(
                f"# name: SmallGroup({n},{i})\n"
                f"# small group id: {n},{i}\n"
                f"# oracle: {args.oracle}\n"
                f"# exported: {args.date}\n"
                "# generators g1..gk: images of the pc generators (Magma G.1..G.k)\n"
            )
        elif line.startswith("@sub"):
            subs.append(line[5:])
        elif line.strip() and current is not None:
            with current.open("a") as fh:
                fh.write(line + "\n")
    (OUT / "index2_subgroups.txt").write_text(
        "# index-2 subgroups: G order, G id, G0 order, G0 id : generator words in G\n"
        + "\n".join(subs) + "\n"
    )


if __name__ == "__main__":
    main()
