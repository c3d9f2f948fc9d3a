"""``opideal`` command line: JSON reports for every library operation.

Exit status is 0 on success, 2 when an input violates a precondition (bad
index, malformed file, pattern mismatch) and 1 on a numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import dixmier, ideals, sequences, snorms, spectra, topology_lab
from .ideals import PreconditionError
from .sequences import PowerLogFamily, SequenceFormatError
from .snorms import InadmissibleIndexError, LorentzIndex, parse_exponent
from .spectra import JacobiConvergenceError

SCHEMA = 1


@dataclass(frozen=True)
class RunConfig:
    """A fully serializable invocation: subcommand, its parameters, seed, output path."""

    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, PowerLogFamily):
        return {"C": x.C, "a": x.a, "b": x.b}
    if isinstance(x, LorentzIndex):
        return {"p": _jsonable(x.p), "q": _jsonable(x.q), "approximable_part": x.approximable_part,
                "name": str(x)}
    return x


def _idx(params, suffix=""):
    return LorentzIndex(parse_exponent(params["p" + suffix]), parse_exponent(params["q" + suffix]),
                        bool(params.get("zero_part" + suffix, False)))


def _family(params):
    return PowerLogFamily(float(params.get("C", 1.0)), float(params["a"]), float(params["b"]))


# ---------------------------------------------------------------------------
# handlers: each takes (params, seed) and returns a JSON-ready dict


def _norm(params, seed):
    mu = sequences.read_csv(params["input"])
    idx = _idx(params)
    if params.get("quasi"):
        nv = snorms.lorentz_quasinorm_detail(mu, idx)
    else:
        nv = snorms.lorentz_norm_detail(mu, idx, normalized=not params.get("raw", False))
    out = {"value": nv.value, "truncation": nv.truncation, "index": idx}
    if nv.argmax_n is not None:
        out["argmax_n"] = nv.argmax_n
    return out


def _classify(params, seed):
    f, idx = _family(params), _idx(params)
    v = ideals.member(f, idx)
    out = {"member": v.member, "boundary": v.boundary, "reason": v.reason, "family": f, "index": idx}
    if params.get("oracle"):
        o = ideals.divergence_oracle(f, idx)
        out["oracle"] = {"verdict": o.verdict, "kind": o.kind, "steps": o.steps, "head": o.head}
    return out


def _include(params, seed):
    i1, i2 = _idx(params, "1"), _idx(params, "2")
    return {"includes": ideals.includes(i1, i2), "idx1": i1, "idx2": i2}


def _preceq(params, seed):
    i1, i2 = _idx(params, "1"), _idx(params, "2")
    return {"preceq": ideals.preceq(i1, i2), "idx1": i1, "idx2": i2}


def _witness(params, seed):
    i1, i2 = _idx(params, "1"), _idx(params, "2")
    f = ideals.non_inclusion_witness(i1, i2)
    return {"witness": f, "idx1": i1, "idx2": i2,
            "member_idx1": ideals.member(f, i1).member, "member_idx2": ideals.member(f, i2).member}


def _factorize(params, seed):
    I, J = _idx(params, "I"), _idx(params, "J")
    if params.get("input"):
        src = sequences.read_csv(params["input"])
    else:
        src = _family(params)
    w = ideals.factorize(src, I, J)
    n_csv = int(params.get("n", 64)) if w.symbolic else None
    s, t = w.arrays(n_csv)
    out = {
        "case": w.case_tag,
        "idx_I": I,
        "idx_J": J,
        "symbolic": w.symbolic,
        "certificates": [dict(asdict(c), passed=c.passed) for c in w.certificates],
        "all_passed": w.all_passed,
    }
    if w.symbolic:
        out["s"], out["t"] = w.s, w.t
    if params.get("csv"):
        lines = ["n,s,t"] + [f"{k + 1},{float(a)!r},{float(b)!r}" for k, (a, b) in enumerate(zip(s, t))]
        Path(params["csv"]).write_text("\n".join(lines) + "\n")
        out["csv"] = params["csv"]
    return out


def _separate(params, seed):
    I, J = _idx(params, "I"), _idx(params, "J")
    e = topology_lab.SeparationExperiment.build(I, J, int(params["dim"]), seed=seed)
    r = topology_lab.run_separation(e, threshold=float(params.get("threshold", 0.1)),
                                    path=params.get("path", "auto"))
    return dict(r.to_dict(), idx_I=I, idx_J=J, witness=e.witness, dim=e.dim)


def _coincide(params, seed):
    idx = _idx(params)
    r = topology_lab.bounded_coincidence(idx, int(params.get("dim", 128)), int(params.get("net_size", 10)),
                                         seed=seed, net=params.get("net", "truncation"))
    return r.to_dict()


def _dixmier(params, seed):
    e = dixmier.dixmier_estimate(_family(params), int(params.get("nmax", 10**6)))
    return e.to_dict()


def _spectra(params, seed):
    T = spectra.read_matrix_csv(params["input"])
    mu = spectra.characteristic_numbers(T)
    if params.get("output"):
        sequences.write_csv(mu, params["output"])
    return {"mu": mu.values, "shape": list(T.shape)}


HANDLERS = {
    "norm": _norm,
    "classify": _classify,
    "include": _include,
    "preceq": _preceq,
    "factorize": _factorize,
    "witness": _witness,
    "separate": _separate,
    "coincide": _coincide,
    "dixmier": _dixmier,
    "spectra": _spectra,
}


def run(config: RunConfig):
    """Execute ``config``; returns ``(exit_code, report_dict)``.

    The report is also written to ``config.out`` (or printed) as JSON.
    """
    report = {"schema": SCHEMA, "command": config.subcommand, "config": _jsonable(config.params),
              "seed": config.seed}
    try:
        result = HANDLERS[config.subcommand](config.params, config.seed)
        report["result"] = _jsonable(result)
        code = 0
    except (PreconditionError, InadmissibleIndexError, SequenceFormatError, FileNotFoundError,
            TypeError, ValueError) as exc:
        report["error"] = {"kind": "precondition", "type": type(exc).__name__, "message": str(exc)}
        code = 2
    except (JacobiConvergenceError, ArithmeticError, FloatingPointError) as exc:
        report["error"] = {"kind": "numeric", "type": type(exc).__name__, "message": str(exc)}
        code = 1
    report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    text = json.dumps(report, sort_keys=True, indent=2)
    if code != 0:
        print(f"opideal {config.subcommand}: {report['error']['message']}", file=sys.stderr)
    if config.out and code == 0:
        Path(config.out).write_text(text + "\n")
    else:
        print(text)
    return code, report


# ---------------------------------------------------------------------------
# argument parsing


def _add_index(p, suffix="", label=""):
    p.add_argument(f"--p{suffix}", required=True, help=f"Lorentz p{label} (number or 'inf')")
    p.add_argument(f"--q{suffix}", required=True, help=f"Lorentz q{label} (number or 'inf')")
    flag = f"--zero-part{'-' + suffix if suffix else ''}"
    p.add_argument(flag, dest=f"zero_part{suffix}", action="store_true",
                   help=f"use the approximable part of L^(p{label},q{label}) (matters for q = inf)")


def _add_family(p, required=True):
    p.add_argument("--a", type=float, required=required, help="power exponent a >= 0")
    p.add_argument("--b", type=float, required=required, help="log exponent b")
    p.add_argument("--C", type=float, default=1.0, help="scale C > 0 (default 1)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="opideal",
        description="Computations with Lorentz ideals of compact operators. Families are "
        "mu_n = C (n+1)^-a log(n+e)^-b; sequences are CSV files with header 'mu'.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("norm", help="Lorentz norm or quasi-norm of a sequence",
                       description="Lorentz (p,q) norm of a CSV sequence; p = q gives the Schatten norm. "
                       "Reports value, truncation length and the argmax for sup-type norms.")
    _add_index(p)
    p.add_argument("--input", required=True, help="CSV sequence file (header 'mu')")
    p.add_argument("--quasi", action="store_true", help="weighted-mu quasi-norm instead (not for (1,inf))")
    p.add_argument("--raw", action="store_true", help="unnormalized weighted-sigma value")

    p = sub.add_parser("classify", help="membership of a power-log family",
                       description="Decide whether mu_n = C (n+1)^-a log(n+e)^-b lies in L^(p,q) "
                       "(or its approximable part) from the exponents.")
    _add_family(p)
    _add_index(p)
    p.add_argument("--oracle", action="store_true", help="also run the asymptotic numerical oracle")

    for name, helptext, desc in [
        ("include", "inclusion L^(p1,q1) in L^(p2,q2)", "Lexicographic inclusion test between two Lorentz ideals."),
        ("preceq", "factorization order between approximable ideals",
         "Whether I is contained in J times the quotient (I:J); approximable parts only, (1,inf) excluded."),
        ("witness", "family separating two ideals",
         "A power-log family in L^(p1,q1) but not in L^(p2,q2); needs the inclusion to fail."),
    ]:
        p = sub.add_parser(name, help=helptext, description=desc)
        _add_index(p, "1", "1")
        _add_index(p, "2", "2")

    p = sub.add_parser("factorize", help="split mu = s t through an intermediate ideal",
                       description="Factor a member of I as s t with s in J and t a multiplier from J into I. "
                       "Give either a family (--a/--b/--C) or --input mu.csv.")
    _add_family(p, required=False)
    p.add_argument("--input", help="CSV sequence file instead of a family")
    _add_index(p, "I", "_I")
    _add_index(p, "J", "_J")
    p.add_argument("--csv", help="write n,s,t rows to this CSV file")
    p.add_argument("--n", type=int, default=64, help="rows in the CSV for symbolic input (default 64)")

    p = sub.add_parser("separate", help="separation experiment for I not contained in J",
                       description="Seminorms of rescaled rank-one projections x_n = E_n / mu_n on the I "
                       "and J sides; reports both curves and a verdict.")
    _add_index(p, "I", "_I")
    _add_index(p, "J", "_J")
    p.add_argument("--dim", type=int, default=10**4, help="ambient dimension (default 10000)")
    p.add_argument("--threshold", type=float, default=0.1, help="J-side threshold (default 0.1)")
    p.add_argument("--path", choices=["auto", "matrix", "diagonal"], default="auto")

    p = sub.add_parser("coincide", help="bounded-net seminorm decay, Hilbert-Schmidt vs L^(p,q)",
                       description="Run a norm-bounded net and compare left multiplier seminorm decay "
                       "against Hilbert-Schmidt and L^(p,q) catalogues.")
    _add_index(p)
    p.add_argument("--dim", type=int, default=128)
    p.add_argument("--net-size", dest="net_size", type=int, default=10)
    p.add_argument("--net", choices=list(topology_lab.NETS), default="truncation")

    p = sub.add_parser("dixmier", help="Dixmier trace on the measurable slice",
                       description="Slope of sigma_N against log N over N_max/8 .. N_max.")
    _add_family(p)
    p.add_argument("--nmax", type=int, default=10**6, help="largest truncation (>= 10000)")

    p = sub.add_parser("spectra", help="characteristic numbers of a CSV matrix",
                       description="Singular values (one-sided Jacobi) of a matrix given as CSV rows of "
                       "complex literals such as 1.5-2i.")
    p.add_argument("--input", required=True, help="matrix CSV file")
    p.add_argument("--output", help="also write the sequence as a 'mu' CSV file")
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    sub, seed, out = ns.pop("subcommand"), ns.pop("seed"), ns.pop("out")
    params = {k: v for k, v in ns.items() if v is not None}
    return RunConfig(sub, params, seed, out)


def main(argv=None) -> int:
    config = config_from_args(argv)
    code, _ = run(config)
    return code


if __name__ == "__main__":
    sys.exit(main())
