"""
Numerical checks of the torus Fourier transforms and of the quantization formula.
"""

import argparse
from typing import Any

import numpy as np
from tabulate import tabulate

from ghx.fourier import (TrigPolynomial, forward, inverse, plancherel_check, quantization_check,
                         sobolev_membership)
from ghx.print import print_error, print_info
from ghx.report import meta, write_document
from ghx.settings import Consts, Settings

from . import load_config, open_output


def fourier_check(args: argparse.Namespace, settings: Settings) -> int:
    """
    Sample random band-limited functions on T^r and check the round trip of the transforms
    and Plancherel. With --config the system (of torus polynomial multipliers) is also
    checked against the quantization formula on the same samples.

    :param args: arguments having `rank`, `components`, `grid_size`, `degree`, `samples`,
                 `seed`, `tolerance`, `config` and `out`
    :param settings: the loaded `Settings`
    :return: 0 when every error is within the tolerance and 1 otherwise
    """
    grid_size = args.grid_size or settings.grid_size
    degree = args.degree if args.degree is not None else grid_size // 2 - 1
    if grid_size % 2 or not 0 <= degree < grid_size // 2:
        print_error(f"need an even grid size with degree < N/2, got N={grid_size} "
                    f"degree={degree}")
        return 1
    system = None
    rank, components = args.rank, args.components
    if args.config:
        config = load_config(args, settings)
        system = config.system
        rank, components = config.group.rank, config.n
    rng = np.random.default_rng(args.seed)
    round_trip, plancherel, quantization = [], [], []
    membership: list[dict[str, Any]] = []
    for sample in range(args.samples):
        poly = TrigPolynomial.random(rng, rank, components, degree)
        f = poly.sample(grid_size)
        coeffs = forward(f)
        round_trip.append(float(np.max(np.abs(inverse(coeffs, grid_size).values - f.values))))
        plancherel.append(plancherel_check(f)[2])
        if system is not None:
            quantization.append(quantization_check(system, poly, grid_size))
        if sample == 0:
            membership = [{"s": rep.s, "cutoffs": rep.cutoffs, "partial_norms": rep.partial_norms,
                           "stabilizes": rep.stabilizes}
                          for rep in sobolev_membership(coeffs, (0.0, 1.0, 2.0))]
    rows = [[name, len(errors), max(errors) if errors else 0.0]
            for name, errors in (("round trip", round_trip), ("plancherel", plancherel),
                                 ("quantization", quantization)) if errors]
    print(tabulate(rows, headers=["Check", "Samples", "Max error"], tablefmt="psql",
                   floatfmt=".3e"))
    if args.out:
        header = meta("fourier", rank=rank, components=components, grid_size=grid_size,
                      degree=degree, samples=args.samples, seed=args.seed)
        with open_output(args.out) as out:
            write_document(out, {"meta": header, "round_trip": round_trip,
                                 "plancherel": plancherel, "quantization": quantization,
                                 "sobolev_membership": membership}, settings.precision)
    failed = [row[0] for row in rows if row[2] > args.tolerance]
    if failed:
        print_error(f"Errors above {args.tolerance:g} in: {', '.join(failed)}")
        return 1
    print_info(f"All {args.samples} sample(s) within {args.tolerance:g}")
    return Consts.exit_ok()
