"""Command-line entry point.

    wigcol run <config-file> [--out DIR] [--stride N] [--quiet]
    wigcol resonances <config-file> [--e-min E] [--e-max E]
    wigcol selftest

Exit codes: 0 ok, 1 config error, 2 runtime abort, 3 self-check failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .core import M_EFF
from .propagate import EdgeAbortError
from .scenarios import ConfigError, build_potential, parse_config, run_scenario
from .spectral import find_resonances


def _cmd_run(args) -> int:
    try:
        cfg = parse_config(args.config)
        if args.stride is not None:
            cfg.stride = args.stride
        out = args.out or (Path(args.config).stem + ".out")
        metrics = run_scenario(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except EdgeAbortError as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        print(f"scenario {cfg.scenario_id} -> {metrics['out_dir']}")
        for key, value in sorted(metrics.items()):
            if isinstance(value, (int, float, bool, str)):
                print(f"  {key} = {value}")
    return 0


def _cmd_resonances(args) -> int:
    try:
        cfg = parse_config(args.config)
        profile = build_potential(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    found = find_resonances(profile, M_EFF, args.e_min, args.e_max)
    print("E_eV")
    for e in found:
        print(f"{e:.5f}")
    return 0


def _cmd_selftest(args) -> int:
    checks = _selftest_checks()
    failures = 0
    for name, fn in checks:
        try:
            fn()
            print(f"PASS {name}")
        except Exception as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")
    return 3 if failures else 0


def _selftest_checks():
    from . import collisions, potentials, spectral, wigner
    from .core import Grid, fidelity, gaussian_packet, mean_wavevector, norm2
    from .ensembles import (CollisionDelta, MemberNotFound, apply_collision,
                            ensemble_of, presence_density)
    from .propagate import evolve, make_stepper

    grid = Grid(nx=1024, dx=0.4, x0=-204.8)
    free = potentials.free_space(grid)

    def check(cond, msg):
        if not cond:
            raise AssertionError(msg)

    def packet_norm():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        check(abs(norm2(psi) - 1) < 1e-10, "norm")
        check(abs(mean_wavevector(psi) - 0.2) < 1e-6, "<k>")

    def parseval():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        spec = np.abs(np.fft.fft(psi.amp)) ** 2
        check(abs(np.sum(spec) / grid.nx * grid.dx - norm2(psi)) < 1e-10,
              "parseval")

    def unitarity():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        out = evolve(psi, free, M_EFF, 0.25, 200, engine="split")
        check(abs(norm2(out) - 1) < 1e-10, "split norm")
        out = evolve(psi, free, M_EFF, 0.25, 200, engine="cn")
        check(abs(norm2(out) - 1) < 1e-10, "cn norm")

    def cn_energy():
        db = potentials.double_barrier(grid, 2.0, 0.3, 16.0)
        basis = spectral.diagonalize(db, M_EFF)
        psi = gaussian_packet(grid, -80.0, 15.0, 0.16)
        e0 = spectral.mean_energy_quadrature(psi, db, M_EFF)
        out = evolve(psi, db, M_EFF, 0.25, 400, engine="cn")
        check(abs(spectral.mean_energy_quadrature(out, db, M_EFF) - e0) < 1e-10,
              "cn energy drift")
        check(basis.size == grid.nx, "basis size")

    def wigner_identities():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        wf = wigner.wigner_transform(psi)
        q = wigner.position_marginal(wf)
        check(np.abs(q - np.abs(psi.amp) ** 2).max() < 1e-9, "x marginal")
        check(abs(np.sum(wf.w) * grid.dx * wf.kgrid.dk - 1) < 1e-8, "norm")
        rec = wigner.reconstruct_pure_state(wf)
        check(fidelity(rec, psi) > 1 - 1e-8, "reconstruction")

    def resonances():
        g = Grid(nx=4096, dx=0.2, x0=-409.6)
        db = potentials.double_barrier(g, 2.0, 0.3, 16.0)
        found = find_resonances(db, M_EFF, 0.005, 0.12, scan_points=400)
        check(len(found) >= 2, "count")
        check(abs(found[0] - 0.023) < 3e-3, "first resonance")
        check(abs(found[1] - 0.096) < 5e-3, "second resonance")

    def positivity():
        a = gaussian_packet(grid, -80.0, 10.0, 0.2)
        b = gaussian_packet(grid, 80.0, 10.0, -0.2)
        ens = ensemble_of((a, 0.5), (b, 0.5))
        outsider = gaussian_packet(grid, 0.0, 10.0, 0.0)
        scattered = gaussian_packet(grid, 40.0, 10.0, 0.1)
        delta = CollisionDelta(outsider, scattered, 0.25)
        blind = apply_collision(ens, delta, strict=False)
        check(presence_density(blind).min() < -1e-10, "blind negativity")
        try:
            apply_collision(ens, delta, strict=True)
            raise AssertionError("strict did not raise")
        except MemberNotFound:
            pass

    def momentum_kick():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        out = collisions.momentum_exchange(psi, 0.15)
        check(np.abs(np.abs(out.amp) ** 2 - np.abs(psi.amp) ** 2).max() < 1e-15,
              "position marginal")
        check(abs(mean_wavevector(out) - 0.35) < 1e-9, "<k> shift")

    def reversibility():
        psi = gaussian_packet(grid, -60.0, 12.0, 0.2)
        from .propagate import time_reverse
        fwd = evolve(psi, free, M_EFF, 0.25, 400, engine="split")
        back = evolve(time_reverse(fwd), free, M_EFF, 0.25, 400, engine="split")
        check(fidelity(time_reverse(back), psi) > 1 - 1e-8, "round trip")

    return [
        ("gaussian packet norm and <k>", packet_norm),
        ("parseval identity", parseval),
        ("unitarity of both engines", unitarity),
        ("cn conserves the FD energy", cn_energy),
        ("wigner marginal + reconstruction", wigner_identities),
        ("double-barrier resonances", resonances),
        ("positivity violation demo", positivity),
        ("momentum kick is a pure phase", momentum_kick),
        ("time reversal round trip", reversibility),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wigcol",
                                     description="1D electron-photon collision "
                                                 "models with Wigner diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--stride", type=int, default=None)
    p_run.add_argument("--quiet", action="store_true")
    p_run.set_defaults(fn=_cmd_run)

    p_res = sub.add_parser("resonances", help="scan transmission resonances")
    p_res.add_argument("config")
    p_res.add_argument("--e-min", type=float, default=0.005)
    p_res.add_argument("--e-max", type=float, default=0.25)
    p_res.set_defaults(fn=_cmd_resonances)

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    p_self.set_defaults(fn=_cmd_selftest)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
