"""Command-line front end: scenario files in, deterministic JSON/CSV reports out.

Exit codes: 0 all verifications passed, 2 verification mismatch (or a rank
that could not be certified), 3 resource limit, 4 schema/input error
(including violated preconditions such as a non-finite-length module for a
duality check), 1 refusal to overwrite an existing report without ``--force``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import __version__
from .bass import (
    PrimeSpec,
    bass_at_graded_prime,
    bass_at_irrelevant,
    star_ideal,
    translate_bass,
    verify_bass_transfer,
    verify_duality,
)
from .errors import (
    DEFAULT_LIMITS,
    HypothesisError,
    NotFiniteLengthError,
    ParseError,
    PresentationUnavailableError,
    ResourceLimitError,
    VbassError,
    limits_from_env,
    use_limits,
)
from .exactalg import GradedRing
from .gmod import GradedModule, cyclic_module, direct_sum, free_module, residue_field
from .localcoh import SemigroupRing, cech_window, verify_veronese_localcoh
from .resolve import betti_table
from .veronese import contract_prime, veronese_hilbert_check, veronese_module, veronese_ring

SCHEMA_VERSION = 1
EXIT_OK, EXIT_OVERWRITE, EXIT_MISMATCH, EXIT_LIMIT, EXIT_SCHEMA = 0, 1, 2, 3, 4

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_STR_LIST = {"type": "array", "items": {"type": "string"}}
_WINDOW = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}


def _task(type_, props, required=()):
    props = dict(props, type={"const": type_}, expect={"type": "object"})
    return {"type": "object", "properties": props, "required": ["type", *required],
            "additionalProperties": False}


SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema", "tasks"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "description": {"type": "string"},
        "seed": {"type": "integer"},
        "limits": {"type": "object", "additionalProperties": False,
                   "properties": {k: {"type": "integer"} if k == "degree_lo"
                                  else {"type": "integer", "minimum": 1}
                                  for k in DEFAULT_LIMITS.as_dict()}},
        "rings": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "variables": _STR_LIST, "weights": _INT_LIST, "relations": _STR_LIST,
                "characteristic": {"type": "integer", "minimum": 0},
                "veronese": {"type": "object", "additionalProperties": False,
                             "required": ["ring", "n"],
                             "properties": {"ring": {"type": "string"},
                                            "n": {"type": "integer", "minimum": 1}}},
            }}},
        "modules": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": False, "required": ["ring"],
            "properties": {
                "ring": {"type": "string"},
                "residueField": {"type": "boolean"},
                "free": _INT_LIST,
                "ideal": _STR_LIST,
                "twist": {"type": "integer"},
                "twists": _INT_LIST,
                "matrix": {"type": "array", "items": _STR_LIST},
                "sourceTwists": _INT_LIST,
                "sum": _STR_LIST,
            }}},
        "primes": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": False, "required": ["ring", "generators"],
            "properties": {"ring": {"type": "string"}, "generators": _STR_LIST}}},
        "tasks": {"type": "array", "items": {"oneOf": [
            _task("betti", {"module": {"type": "string"}, "iMax": {"type": "integer", "minimum": 0}},
                  ["module"]),
            _task("bass", {"module": {"type": "string"}, "prime": {"type": ["string", "null"]},
                           "iMax": {"type": "integer", "minimum": 0},
                           "method": {"enum": ["randomized", "deterministic", "both"]},
                           "degreeBound": {"type": "integer", "minimum": 0}}, ["module"]),
            _task("veronese", {"ring": {"type": "string"}, "n": {"type": "integer", "minimum": 1},
                               "module": {"type": "string"}, "prime": {"type": "string"},
                               "window": _WINDOW}, ["ring", "n"]),
            _task("bass-transfer", {"module": {"type": "string"}, "prime": {"type": "string"},
                                    "n": {"type": "integer", "minimum": 1},
                                    "iMax": {"type": "integer", "minimum": 0},
                                    "method": {"enum": ["randomized", "deterministic", "both"]}},
                  ["module", "prime", "n"]),
            _task("localcoh", {"ring": {"type": "string"}, "gens": _STR_LIST,
                               "n": {"type": "integer", "minimum": 1},
                               "i": {"type": "integer", "minimum": 0},
                               "box": {"type": "integer", "minimum": 0},
                               "totalWindow": _WINDOW}, ["ring", "gens", "i"]),
            _task("duality-check", {"module": {"type": "string"},
                                    "iMax": {"type": "integer", "minimum": 0}}, ["module"]),
            _task("verify-all", {"suites": {"type": "array", "items": {
                "enum": ["duality", "transfer", "oracle"]}},
                "iMax": {"type": "integer", "minimum": 0}}),
        ]}},
    },
}


class SchemaError(VbassError):
    pass


# --------------------------------------------------------------------------
# scenario objects


class Context:
    def __init__(self, doc, limits, seed, strict):
        self.doc = doc
        self.limits = limits
        self.seed = seed
        self.strict = strict
        self.rings, self.veroneses, self.modules, self.primes = {}, {}, {}, {}

    def ring(self, name):
        if name not in self.rings:
            spec = self.doc.get("rings", {}).get(name)
            if spec is None:
                raise SchemaError(f"unknown ring {name!r}")
            if "veronese" in spec:
                extra = set(spec) - {"veronese"}
                if extra:
                    raise SchemaError(f"ring {name!r}: 'veronese' excludes {sorted(extra)}")
                V = veronese_ring(self.ring(spec["veronese"]["ring"]), spec["veronese"]["n"])
                self.veroneses[name] = V
                self.rings[name] = V.presentation
            else:
                if "variables" not in spec:
                    raise SchemaError(f"ring {name!r}: 'variables' is required")
                try:
                    self.rings[name] = GradedRing(spec["variables"], spec.get("weights"),
                                                  spec.get("relations", []),
                                                  spec.get("characteristic", 0))
                except ParseError:
                    raise
                except ValueError as exc:
                    raise SchemaError(f"ring {name!r}: {exc}") from exc
        return self.rings[name]

    def module(self, name):
        if name not in self.modules:
            spec = self.doc.get("modules", {}).get(name)
            if spec is None:
                raise SchemaError(f"unknown module {name!r}")
            R = self.ring(spec["ring"])
            kinds = [k for k in ("residueField", "free", "ideal", "twists", "sum") if k in spec]
            if len(kinds) != 1:
                raise SchemaError(f"module {name!r}: give exactly one of residueField/free/"
                                  f"ideal/twists/sum")
            kind = kinds[0]
            try:
                if kind == "residueField":
                    M = residue_field(R, spec.get("twist", 0))
                elif kind == "free":
                    M = free_module(R, spec["free"])
                elif kind == "ideal":
                    M = cyclic_module(R, spec["ideal"], spec.get("twist", 0))
                elif kind == "twists":
                    M = GradedModule.from_json(spec, R)
                else:
                    M = direct_sum(*[self.module(s) for s in spec["sum"]])
            except ParseError:
                raise
            except ValueError as exc:
                raise SchemaError(f"module {name!r}: {exc}") from exc
            self.modules[name] = M
        return self.modules[name]

    def prime(self, name):
        if name not in self.primes:
            spec = self.doc.get("primes", {}).get(name)
            if spec is None:
                raise SchemaError(f"unknown prime {name!r}")
            self.primes[name] = PrimeSpec(self.ring(spec["ring"]), spec["generators"])
        return self.primes[name]


def _mismatch(expected, got, what):
    return {"field": what, "expected": expected, "got": got}


def _check_expect(expect, actual):
    """Compare each expected key to the actual result (first mismatch first)."""
    bad = []
    for key, want in expect.items():
        if key not in actual:
            bad.append(_mismatch(want, None, key))
        elif isinstance(want, dict):
            got = actual[key]
            for k, v in want.items():
                if got.get(k, 0) != v:
                    bad.append(_mismatch(v, got.get(k, 0), f"{key}.{k}"))
        elif actual[key] != want:
            bad.append(_mismatch(want, actual[key], key))
    return bad


def _uncertified(flags):
    return [f for f in flags if f in ("unstabilized", "window-insufficient", "boundaryFlag")
            or f.startswith("randomized-rank-uncertified")]


def run_task(ctx, task):
    """Execute one task; returns (result dict, csv text or None, verified-pass or None)."""
    kind = task["type"]
    i_max_default = ctx.limits.i_max
    csv = None
    verified = None
    flags = []
    if kind == "betti":
        M = ctx.module(task["module"])
        table = betti_table(M, task.get("iMax", i_max_default))
        result = table.to_json()
        csv = table.to_csv()
    elif kind == "bass":
        M = ctx.module(task["module"])
        i_max = task.get("iMax", min(i_max_default, 2))
        pname = task.get("prime")
        if pname is None:
            table = bass_at_irrelevant(M, i_max)
        else:
            p = ctx.prime(pname)
            method = task.get("method", "randomized")
            if p.is_homogeneous:
                table = bass_at_graded_prime(M, p, i_max, ctx.seed, method, ctx.strict)
            else:
                star = star_ideal(p, p.ring, task.get("degreeBound", 6))
                graded = bass_at_graded_prime(M, star, max(i_max - 1, 0), ctx.seed, method,
                                              ctx.strict)
                table = translate_bass(graded, p)
                flags += star.flags
        result = table.to_json()
        result["entriesList"] = table.as_list()
        flags += table.flags
        csv = table.to_csv()
    elif kind == "veronese":
        R = ctx.ring(task["ring"])
        V = veronese_ring(R, task["n"])
        result = {"ring": V.to_json()}
        if "module" in task:
            M = ctx.module(task["module"])
            result["module"] = veronese_module(M, V).to_json()
            lo, hi = task.get("window", [0, 2 * task["n"] * 2])
            check = veronese_hilbert_check(M, V, (lo, hi))
            result["hilbertCheck"] = check
            verified = check["pass"]
        if "prime" in task:
            q = contract_prime(ctx.prime(task["prime"]), V)
            result["contracted"] = q.to_json()
    elif kind == "bass-transfer":
        M = ctx.module(task["module"])
        result = verify_bass_transfer(M, task["n"], ctx.prime(task["prime"]),
                                      task.get("iMax", 2), ctx.seed, task.get("method", "both"))
        verified = result["pass"]
    elif kind == "localcoh":
        R = ctx.ring(task["ring"])
        if R.relations:
            raise SchemaError("localcoh needs a polynomial ring (monomial ideals of ℕ^e)")
        gens = []
        for g in task["gens"]:
            f = R.parse(g)
            if len(f.terms) != 1:
                raise SchemaError(f"localcoh generator {g!r} is not a monomial")
            gens.append(next(iter(f.terms)))
        box = task.get("box", ctx.limits.cech_box)
        window = tuple(task["totalWindow"]) if "totalWindow" in task else None
        if "n" in task:
            result = verify_veronese_localcoh(gens, task["n"], task["i"], box, window, R.weights)
            verified = result["pass"]
            if any(result["boundaryFlags"].values()):
                flags.append("boundaryFlag")
        else:
            win = cech_window(SemigroupRing(R.nvars, R.weights), gens, task["i"], box, window)
            result = win.to_json()
            if win.boundary_flag:
                flags.append("boundaryFlag")
    elif kind == "duality-check":
        result = verify_duality(ctx.module(task["module"]), task.get("iMax", 3))
        verified = result["pass"]
    elif kind == "verify-all":
        from . import suites

        wanted = task.get("suites", ["duality", "transfer", "oracle"])
        result = {}
        if "duality" in wanted:
            result["duality"] = suites.run_duality_suite(task.get("iMax", 3))
        if "transfer" in wanted:
            result["transfer"] = suites.run_transfer_suite(seed=ctx.seed)
        if "oracle" in wanted:
            result["oracle"] = suites.run_oracle_suite()
        verified = all(r["pass"] for r in result.values())
    else:  # pragma: no cover - excluded by the schema
        raise SchemaError(f"unknown task type {kind!r}")
    if "expect" in task:
        bad = _check_expect(task["expect"], result)
        result["expectMismatches"] = bad
        verified = (verified is not False) and not bad
    if ctx.strict and _uncertified(flags):
        verified = False
    return result, csv, verified, flags


# --------------------------------------------------------------------------
# driver


def load_scenario(path):
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = _task_branch_error(errors[0])
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SchemaError(f"{path}: schema error at {where}: {err.message}")
    return doc


def _task_branch_error(err):
    """For a task failing the oneOf, report the error of the branch named by its type."""
    if err.validator != "oneOf" or not isinstance(err.instance, dict):
        return err
    for sub in err.context:
        branch = err.validator_value[sub.relative_schema_path[0]]
        if branch["properties"]["type"].get("const") == err.instance.get("type"):
            return sub
    return err


def _dump(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def run_scenario(path, out_dir=None, force=False, strict=False, seed=None, stream=None):
    """Run every task of a scenario; returns the exit code."""
    stream = stream or sys.stdout
    try:
        doc = load_scenario(path)
        limits = DEFAULT_LIMITS
        if "limits" in doc:
            limits = limits.updated(**doc["limits"])
        limits = limits_from_env(limits)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    seed = seed if seed is not None else doc.get("seed", 0)
    out = Path(out_dir) if out_dir else Path(path).with_suffix("").with_name(Path(path).stem + "_out")
    if out.exists() and any(out.iterdir()) and not force:
        print(f"error: output directory {out} is not empty (use --force)", file=sys.stderr)
        return EXIT_OVERWRITE
    ctx = Context(doc, limits, seed, strict)
    report = {
        "metadata": {"schema": SCHEMA_VERSION, "vbass": __version__, "seed": seed,
                     "strict": strict, "limits": limits.as_dict(), "scenario": Path(path).name},
        "tasks": [],
    }
    files = {}
    code = EXIT_OK
    with use_limits(limits):
        for idx, task in enumerate(doc["tasks"]):
            entry = {"index": idx, "type": task["type"]}
            try:
                result, csv, verified, flags = run_task(ctx, task)
            except (SchemaError, ParseError, HypothesisError, PresentationUnavailableError,
                    NotFiniteLengthError) as exc:
                print(f"error: task {idx} ({task['type']}): {exc}", file=sys.stderr)
                return EXIT_SCHEMA
            except ResourceLimitError as exc:
                entry.update(status="resource-limit", error=str(exc))
                report["tasks"].append(entry)
                code = EXIT_LIMIT
                print(f"task {idx} ({task['type']}): {exc}", file=stream)
                break
            except VbassError as exc:
                entry.update(status="error", error=str(exc), verified=False)
                report["tasks"].append(entry)
                code = max(code, EXIT_MISMATCH)
                print(f"task {idx} ({task['type']}): FAIL {exc}", file=stream)
                continue
            entry["flags"] = flags
            if verified is not None:
                entry["verified"] = verified
            entry["result"] = result
            report["tasks"].append(entry)
            stem = f"task{idx:02d}_{task['type']}"
            files[stem + ".json"] = _dump(result)
            if csv is not None:
                files[stem + ".csv"] = csv
            status = "ok" if verified is None else ("PASS" if verified else "FAIL")
            print(f"task {idx} ({task['type']}): {status}", file=stream)
            if verified is False:
                code = max(code, EXIT_MISMATCH)
                first = _first_mismatch(result)
                if first:
                    print(f"  first mismatch: {json.dumps(first, ensure_ascii=False)}", file=stream)
    report["exitCode"] = code
    out.mkdir(parents=True, exist_ok=True)
    files["report.json"] = _dump(report)
    for name, text in sorted(files.items()):
        (out / name).write_text(text)
    return code


def _first_mismatch(result):
    for key in ("expectMismatches", "mismatches"):
        if result.get(key):
            return result[key][0]
    if result.get("firstMismatch"):
        return result["firstMismatch"]
    for sub in result.values():
        if isinstance(sub, dict) and "cases" in sub:
            for case in sub["cases"]:
                if not case["pass"]:
                    return case
    return None


# --------------------------------------------------------------------------
# one-shot forms


def _ring_doc(args):
    doc = {"variables": args.vars.split(",")}
    if args.weights:
        doc["weights"] = [int(w) for w in args.weights.split(",")]
    if args.relations:
        doc["relations"] = _split(args.relations)
    return doc


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _module_doc(args, ring="R"):
    if getattr(args, "residue", False):
        return {"ring": ring, "residueField": True, "twist": args.twist}
    if getattr(args, "free", None):
        return {"ring": ring, "free": [int(a) for a in args.free.split(",")]}
    return {"ring": ring, "ideal": _split(args.ideal or ""), "twist": args.twist}


def _window(text):
    lo, hi = text.split(":")
    return [int(lo), int(hi)]


def one_shot(args):
    rings = {"R": _ring_doc(args)}
    ring_name = "R"
    if getattr(args, "over_veronese", None):
        rings["V"] = {"veronese": {"ring": "R", "n": args.over_veronese}}
        ring_name = "V"
    doc = {"schema": SCHEMA_VERSION, "rings": rings, "tasks": []}
    if args.command == "betti":
        doc["modules"] = {"M": _module_doc(args, ring_name)}
        doc["tasks"].append({"type": "betti", "module": "M", "iMax": args.imax})
    elif args.command == "bass":
        doc["modules"] = {"M": _module_doc(args)}
        task = {"type": "bass", "module": "M", "iMax": args.imax, "method": args.method}
        if args.prime:
            doc["primes"] = {"p": {"ring": "R", "generators": _split(args.prime)}}
            task["prime"] = "p"
        doc["tasks"].append(task)
    elif args.command == "veronese":
        task = {"type": "veronese", "ring": "R", "n": args.n}
        if args.action == "module":
            doc["modules"] = {"M": _module_doc(args)}
            task["module"] = "M"
            if args.window:
                task["window"] = _window(args.window)
        if args.action == "contract":
            doc["primes"] = {"p": {"ring": "R", "generators": _split(args.prime or "")}}
            task["prime"] = "p"
        doc["tasks"].append(task)
    elif args.command == "localcoh":
        task = {"type": "localcoh", "ring": "R", "gens": _split(args.gens), "i": args.i,
                "box": args.box}
        if args.n:
            task["n"] = args.n
        if args.total_window:
            task["totalWindow"] = _window(args.total_window)
        doc["tasks"].append(task)
    limits = limits_from_env(DEFAULT_LIMITS)
    ctx = Context(doc, limits, args.seed, args.strict)
    try:
        jsonschema.validate(doc, SCENARIO_SCHEMA)
        with use_limits(limits):
            result, _csv, verified, flags = run_task(ctx, doc["tasks"][0])
    except (SchemaError, ParseError, HypothesisError, PresentationUnavailableError,
            NotFiniteLengthError, jsonschema.ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except VbassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if flags:
        result = dict(result, flags=sorted(set(result.get("flags", [])) | set(flags)))
    sys.stdout.write(_dump(result))
    return EXIT_MISMATCH if verified is False else EXIT_OK


def run_verify(args):
    from . import suites

    with use_limits(limits_from_env(DEFAULT_LIMITS)):
        report = {"duality": suites.run_duality_suite(),
                  "transfer": suites.run_transfer_suite(seed=args.seed)}
        if args.oracle:
            report["oracle"] = suites.run_oracle_suite()
    for name, rep in report.items():
        print(f"{name}: {'PASS' if rep['pass'] else 'FAIL'} ({len(rep['cases'])} cases)")
    return EXIT_OK if all(r["pass"] for r in report.values()) else EXIT_MISMATCH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="vbass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"vbass {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    run.add_argument("--out")
    run.add_argument("--force", action="store_true")
    run.add_argument("--strict", action="store_true")
    run.add_argument("--seed", type=int)

    def ring_args(p):
        p.add_argument("--vars", required=True, help="comma-separated variable names")
        p.add_argument("--weights", help="comma-separated positive weights")
        p.add_argument("--relations", help="comma-separated homogeneous relations")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--strict", action="store_true")

    def module_args(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--ideal", help="M = R/(ideal), comma-separated generators")
        g.add_argument("--residue", action="store_true", help="M = k")
        g.add_argument("--free", help="M = ⊕ R(-a), comma-separated twists")
        p.add_argument("--twist", type=int, default=0)

    b = sub.add_parser("betti", help="Betti table of a module")
    ring_args(b)
    module_args(b)
    b.add_argument("--over-veronese", type=int, help="work over R^(n) instead of R")
    b.add_argument("--imax", type=int, default=DEFAULT_LIMITS.i_max)

    ba = sub.add_parser("bass", help="Bass numbers at m or at a prime")
    ring_args(ba)
    module_args(ba)
    ba.add_argument("--prime", help="comma-separated prime generators (default: m)")
    ba.add_argument("--imax", type=int, default=2)
    ba.add_argument("--method", choices=["randomized", "deterministic", "both"],
                    default="randomized")

    v = sub.add_parser("veronese", help="Veronese ring/module presentations, contractions")
    v.add_argument("action", choices=["ring", "module", "contract"])
    ring_args(v)
    module_args(v)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--prime")
    v.add_argument("--window", help="lo:hi for the Hilbert check")

    lc = sub.add_parser("localcoh", help="Čech local cohomology window")
    ring_args(lc)
    lc.add_argument("--gens", required=True, help="comma-separated monomials")
    lc.add_argument("--n", type=int, help="also verify Prop 6.2 against R^(n)")
    lc.add_argument("--i", type=int, required=True)
    lc.add_argument("--box", type=int, default=DEFAULT_LIMITS.cech_box)
    lc.add_argument("--total-window", help="lo:hi total-degree window (use --total-window=-6:6 for negative bounds)")

    ver = sub.add_parser("verify", help="run the built-in verification corpora")
    ver.add_argument("--oracle", action="store_true", help="include oracle agreement")
    ver.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_scenario(args.scenario, args.out, args.force, args.strict, args.seed)
    if args.command == "verify":
        return run_verify(args)
    return one_shot(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
