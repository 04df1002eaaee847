"""Write SVG figures for a few canonical chains and slice developments.

    python3 scripts/figure_examples.py --outdir figures
"""
import argparse
import math
from pathlib import Path

from slicedev import polytope as pt
from slicedev.arm import SamplingMode, sample_valid_turns
from slicedev.chain import ChainSpec, configure
from slicedev.develop import Side, boundary_spec, develop
from slicedev.polytope import PlaneSpec
from slicedev.svg import render

PI = math.pi


def arm_figures(outdir: Path):
    spec = ChainSpec((1.0, 1.0, 1.0, 1.0, 1.0), (2 * PI / 5,) * 4)
    a = configure(spec)
    for mode in SamplingMode:
        b = configure(spec.with_turns(sample_valid_turns(spec.turns, 3, mode)))
        (outdir / f"arm_{mode.value}.svg").write_text(
            render(a.joints, b.joints, a.hand_distance(), title=f"arm {mode.value}"))


def slice_figures(outdir: Path):
    cases = {"cube_mid": (pt.cube(), (0, 0, 1, 0.5)),
             "cube_tilted": (pt.cube(), (0.2, 0.3, 1, 0.7)),
             "tetra": (pt.tetrahedron(), (0, 0, 1, 0.3)),
             "random_hull": (pt.random_hull(40, 5), (0.3, -0.5, 1.0, 0.1))}
    for name, (poly, coeffs) in cases.items():
        res = pt.slice(poly, PlaneSpec.from_coefficients(*coeffs))
        if res.curve is None:
            print(f"{name}: {res.variant.value}, skipped")
            continue
        a = configure(boundary_spec(res.curve))
        dev = develop(res.curve, Side.RIGHT)
        (outdir / f"slice_{name}.svg").write_text(
            render(a.joints, dev.chain.joints, a.hand_distance(), title=name))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--outdir", default="figures")
    outdir = Path(ap.parse_args().outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    arm_figures(outdir)
    slice_figures(outdir)
    print("wrote", ", ".join(sorted(p.name for p in outdir.glob("*.svg"))))


if __name__ == "__main__":
    main()
