"""``qwit`` command-line entry point.

Exit status: 0 on success, 1 when a precondition fails, 2 on I/O or parse
errors. All JSON is written with sorted keys and 12 significant digits, so a
fixed configuration and seed always reproduce the same bytes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys


from . import bell, classical, collective, optimal_qubit, phase_space, witnesses
from .operators import QwitError, eigvalsh, operator_from_dict, operator_to_dict
from .serialize import csv_text, dumps, load_json, write_text
from .states import state_from_dict

DEFAULT_SEED = 20091030
EXIT_OK, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2


def master_seed(cli_value: int | None) -> int:
    if cli_value is not None:
        return cli_value
    return int(os.environ.get("QWIT_SEED", DEFAULT_SEED))


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _load_operator(path):
    return operator_from_dict(load_json(path))


def _pair_or_optimal(a_path, b_path):
    if (a_path is None) != (b_path is None):
        raise QwitError("give both operator files or neither")
    if a_path is None:
        return optimal_qubit.optimal_pair()
    return _load_operator(a_path), _load_operator(b_path)


# -- subcommands --------------------------------------------------------------------

def cmd_optimal_qubit(args) -> int:
    report = optimal_qubit.optimal_witness()
    A, B = report.constituents
    payload = report.to_dict()
    payload.update(A=operator_to_dict(A), B=operator_to_dict(B))
    _emit(dumps(payload), args.out)
    return EXIT_OK


def cmd_bloch_scan(args) -> int:
    A, B = _pair_or_optimal(args.A, args.B)
    table = optimal_qubit.bloch_scan(A, B, args.ntheta, args.nphi)
    write_text(args.out, csv_text(["theta", "phi", "mean_BmA", "mean_V"], table.rows()))
    summary = table.summary()
    summary["negative_components"] = table.negative_components()
    sys.stdout.write(dumps(summary))
    return EXIT_OK


def cmd_construct(args) -> int:
    rho = state_from_dict(load_json(args.state))
    report = witnesses.construct_for_state(rho, args.alpha)
    _emit(dumps(report.to_dict()), args.out)
    return EXIT_OK


def cmd_collective(args) -> int:
    a, b = _pair_or_optimal(args.a, args.b)
    rows = collective.scaling_report(a, b, args.nmax)
    write_text(args.out, csv_text(["N", "lambda_min", "bound"], [(r.N, r.lambda_min, r.bound) for r in rows]))
    sys.stdout.write(dumps({
        "mu": collective.single_site_mu(a, b),
        "rows": [{"N": r.N, "lambda_min": r.lambda_min, "bound": r.bound, "cross_min": r.cross_min,
                  "decomposition_residual": r.decomposition_residual} for r in rows],
    }))
    return EXIT_OK


def cmd_chsh(args) -> int:
    seed = master_seed(args.seed)
    audit = bell.audit_many(args.seeds, dim=args.dim, master_seed=seed)
    tsirelson = bell.BellSetting.tsirelson()
    payload = {
        "seed": seed,
        "dim": args.dim,
        "seeds": args.seeds,
        "k_star": audit["k_star"],
        "k_values": audit["k_values"],
        "max_residual": audit["max_residual"],
        "xy_psd": audit["xy_psd"],
        "min_bell_lambda": audit["min_bell_lambda"],
        "tsirelson_lambda_min": float(eigvalsh(bell.bell_operator(tsirelson))[0]),
        "tsirelson_k_star": bell.identity_audit(tsirelson).k_star,
        "lhv_bound": bell.lhv_chsh_bound().bound,
        "conventional_factor": bell.CONVENTIONAL_IDENTITY_FACTOR,
        "conventional_factor_matches": audit["k_star"] == bell.CONVENTIONAL_IDENTITY_FACTOR,
    }
    _emit(dumps(payload), args.out)
    return EXIT_OK


def cmd_classical_check(args) -> int:
    data = classical.MomentDataset.from_json(load_json(args.data))
    check = classical.minimal_model_check(data, (args.A, args.B), args.tol)
    _emit(dumps(check.to_dict()), args.out)
    return EXIT_OK


def cmd_classical_demo(args) -> int:
    demo = classical.unordered_steps_demo() if args.example in ("2", "unordered") else classical.coarse_states_demo()
    _emit(dumps(demo), args.out)
    return EXIT_OK


def cmd_phase_space(args) -> int:
    rows = phase_space.km_scan(args.m, args.zmax, args.nz)
    write_text(args.out, csv_text(["abs_z_sq", "coherent_mean", "closed_form"], rows))
    block = phase_space.km_spectrum(args.m).to_dict()
    _emit(dumps(block), args.json)
    return EXIT_OK


def cmd_generalized(args) -> int:
    try:
        coeffs = json.loads(args.coeffs)
    except json.JSONDecodeError as exc:
        raise OSError(f"--coeffs is not valid JSON: {exc}") from exc
    if args.R is None and args.S is None:
        A, B = optimal_qubit.optimal_pair()
        R, S = A, B - A
    else:
        R, S = _pair_or_optimal(args.R, args.S)
    report = witnesses.check_generalized(witnesses.GeneralizedWitnessSpec(coeffs, R, S))
    payload = report.to_dict()
    payload["coeffs"] = coeffs
    _emit(dumps(payload), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwit", description="Construct and verify quantumness witnesses.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimal-qubit", help="optimal single-qubit witness B^2 - A^2 under Tr B = 2",
                       description="Closed-form optimal qubit pair 0 <= A <= B with Tr B = 2; "
                                   "reports lambda_min = -4/27 and the certifying vector.")
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimal_qubit)

    p = sub.add_parser("bloch-scan", help="means of B - A and B^2 - A^2 over the Bloch sphere",
                       description="Scan <B - A> and <B^2 - A^2> over pure qubit states psi(theta, phi). "
                                   "Without --A/--B the optimal qubit pair is used.")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--ntheta", type=int, default=181)
    p.add_argument("--nphi", type=int, default=360)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bloch_scan)

    p = sub.add_parser("construct", help="witness C = XY + YX with negative mean on a given state",
                       description="Build rank-one X, Y >= 0 with Tr(rho {X, Y}) < 0 for any "
                                   "non-maximally-mixed density matrix.")
    p.add_argument("--state", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("collective", help="N-body collective witness scaling against -mu/N",
                       description="Exact diagonalization of B^2 - A^2 for A = (1/N) sum a_i, "
                                   "B = (1/N) sum b_i. Without --a/--b the optimal qubit pair is used.")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_collective)

    p = sub.add_parser("chsh", help="CHSH bound, Tsirelson violation and Bell-observable identity audit",
                       description="Classical CHSH bound by enumeration, the Tsirelson setting, and an "
                                   "audit of k * Bell = {X, Y} + [A1, A2][B1, B2] over seeded settings.")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, help=f"master seed (default $QWIT_SEED or {DEFAULT_SEED})")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("classical-check", help="minimal classical model check on a moment dataset",
                       description="Decide whether first/second moments of two observables admit a "
                                   "minimal classical model.")
    p.add_argument("--data", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--tol", type=float, default=classical.DEFAULT_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classical_check)

    p = sub.add_parser("classical-demo", help="step-function demos: unordered pair and coarse-state loophole",
                       description="Two demos on step observables over three unit cells. '2' or 'unordered': "
                                   "peaked states show the pair is not ordered. '3' or 'coarse': coarse states "
                                   "order the means yet give <B^2> - <A^2> = -0.125.")
    p.add_argument("--example", choices=("2", "3", "unordered", "coarse"), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classical_demo)

    p = sub.add_parser("phase-space", help="phase-space witness K_m on coherent and Fock states",
                       description="Coherent-state means of K_m = (a^dag)^2 a^2 - 2m a^dag a + m^2 against "
                                   "(|z|^2 - m)^2, plus the K_m spectrum and its negative window.")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--zmax", type=float, default=3.0)
    p.add_argument("--nz", type=int, default=31)
    p.add_argument("--out", required=True)
    p.add_argument("--json", help="write the spectrum block here instead of stdout")
    p.set_defaults(func=cmd_phase_space)

    p = sub.add_parser("generalized", help="generalized witness W(R; S) from an ordered polynomial",
                       description="Check w(r, s) >= 0 on Spec(R) x Spec(S) and a negative eigenvalue of "
                                   "W(R; S). Without --R/--S uses R = A, S = B - A of the optimal qubit pair.")
    p.add_argument("--R")
    p.add_argument("--S")
    p.add_argument("--coeffs", default='{"RR": 1, "RS": 1, "SR": 1}',
                   help='JSON map from words over R, S to coefficients, e.g. \'{"RS": 1, "SR": 1}\'')
    p.add_argument("--out")
    p.set_defaults(func=cmd_generalized)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QwitError as exc:
        print(f"qwit {args.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"qwit {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
