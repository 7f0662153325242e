"""Command line front end: ``equitest fit|test|cet|bf|simulate``.

Exit codes: 0 success (whatever the statistical outcome), 1 I/O or parse
error, 2 violated statistical precondition, 3 numerical non-convergence.
Errors are reported on stderr as a JSON object with an ``error`` field.
"""

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources
from pathlib import Path

from . import bayes, equivalence, simulation
from .equivalence import Margin, Scale, TestKind
from .exceptions import EquitestError, InputError
from .linear_model import Dataset, RegressionFit, fit_ols

SALARIES_OUTCOME = "salary"
SALARIES_COVARIATES = ("sex", "yrs.since.phd", "yrs.service", "discipline", "rank")
# reference level of each categorical column; the remaining levels become dummies
SALARIES_CODING = {"sex": "Female", "discipline": "A", "rank": "AsstProf"}
SALARIES_COUNTS = {"n": 397, "Male": 358, "Female": 39}

PRESETS = {
    "study1-smoke": "study1_smoke.json",
    "study1-full": "study1_full.json",
    "study1-correlated-full": "study1_correlated_full.json",
    "study2-smoke": "study2_smoke.json",
    "study2-full": "study2_full.json",
}


# ---------------------------------------------------------------------------
# CSV ingestion

class Table:
    """Header plus string cells, remembering the source line of each row."""

    def __init__(self, header, rows, lines, source):
        self.header = header
        self.rows = rows
        self.lines = lines
        self.source = source

    def column(self, name):
        try:
            j = self.header.index(name)
        except ValueError:
            raise InputError(f"{self.source}: no column {name!r}; columns are {self.header}") from None
        return [row[j] for row in self.rows]

    def numeric(self, name):
        out = []
        for cell, line in zip(self.column(name), self.lines):
            try:
                value = float(cell)
            except ValueError:
                raise InputError(f"{self.source}, line {line}: non-numeric value {cell!r} in column {name!r}") from None
            if not math.isfinite(value):
                raise InputError(f"{self.source}, line {line}: non-finite value {cell!r} in column {name!r}")
            out.append(value)
        return out


def read_table(text, source="<input>"):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError(f"{source}: empty file (a header row is required)") from None
    header = [h.strip() for h in header]
    if not header or any(h == "" for h in header):
        raise InputError(f"{source}, line 1: header has empty column names")
    if len(set(header)) != len(header):
        raise InputError(f"{source}, line 1: duplicate column names")
    rows, lines = [], []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise InputError(f"{source}, line {line}: expected {len(header)} fields, found {len(row)}")
        rows.append([c.strip() for c in row])
        lines.append(line)
    if not rows:
        raise InputError(f"{source}: no data rows")
    return Table(header, rows, lines, source)


def load_table(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return read_table(text, str(path))


def build_dataset(table, outcome, covariates, coding=None):
    """Dataset from named columns; columns in ``coding`` are dummy coded.

    A two-level categorical column keeps its own name; columns with more
    levels produce one ``name[level]`` dummy per non-reference level, levels
    in sorted order.
    """
    coding = dict(coding or {})
    covariates = list(covariates)
    if not covariates:
        raise InputError("at least one covariate is required")
    if outcome in covariates:
        raise InputError(f"outcome {outcome!r} is also listed as a covariate")
    unknown = set(coding) - set(covariates)
    if unknown:
        raise InputError(f"categorical coding given for columns not in the model: {sorted(unknown)}")
    y = table.numeric(outcome)
    columns, names = [], []
    for name in covariates:
        if name not in coding:
            columns.append(table.numeric(name))
            names.append(name)
            continue
        cells = table.column(name)
        levels = sorted(set(cells))
        ref = coding[name]
        if ref not in levels:
            raise InputError(f"reference level {ref!r} does not occur in column {name!r} (levels {levels})")
        others = [lv for lv in levels if lv != ref]
        if not others:
            raise InputError(f"categorical column {name!r} has a single level")
        for lv in others:
            columns.append([1.0 if c == lv else 0.0 for c in cells])
            names.append(name if len(others) == 1 else f"{name}[{lv}]")
    X = [list(row) for row in zip(*columns)]
    return Dataset(y, X, names)


def salaries_table():
    text = resources.files("equitest").joinpath("data/salaries.csv").read_text(encoding="utf-8")
    table = read_table(text, "salaries.csv")
    sex = table.column("sex")
    counts = {"n": len(table.rows), "Male": sex.count("Male"), "Female": sex.count("Female")}
    if counts != SALARIES_COUNTS:
        raise InputError(f"bundled salary data failed validation: {counts} != {SALARIES_COUNTS}")
    return table


def load_salaries(covariates=SALARIES_COVARIATES):
    """The bundled faculty-salary data, coded so that the full model has six covariates."""
    covariates = list(covariates)
    coding = {c: SALARIES_CODING[c] for c in covariates if c in SALARIES_CODING}
    return build_dataset(salaries_table(), SALARIES_OUTCOME, covariates, coding)


# ---------------------------------------------------------------------------
# output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return obj


def _flatten(d, prefix=""):
    out = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)):
            for i, v in enumerate(value):
                out[f"{name}[{i}]"] = v
        else:
            out[name] = value
    return out


def _fit_rows(fit_dict):
    rows = []
    for j, name in enumerate(["(intercept)"] + fit_dict["column_names"]):
        row = {"term": name, "beta_hat": fit_dict["beta_hat"][j], "se_beta_hat": fit_dict["se_beta_hat"][j]}
        for key in ("b_std_hat", "se_b_std_hat", "r2_y_minus_k", "r2_k_minus_k", "diff_r2"):
            row[key] = fit_dict[key][j - 1] if j > 0 else None
        rows.append(row)
    return rows


def _table_cell(v, digits):
    if isinstance(v, float):
        return f"{v:.{digits}f}"
    return "" if v is None else str(v)


def render(payload, fmt, kind):
    payload = _jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if kind == "fit":
        rows = _fit_rows(payload)
        header = list(rows[0])
        extra = {k: payload[k] for k in ("n", "k", "sigma_hat", "r2_yx")}
    else:
        rows = [{"field": k, "value": v} for k, v in _flatten(payload).items()]
        header = ["field", "value"]
        extra = {}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if row[k] is None else row[k]) for k in header})
        return buf.getvalue()
    digits = 3 if kind != "fit" else 2
    lines = ["  ".join(f"{h:>14}" for h in header)]
    for row in rows:
        lines.append("  ".join(f"{_table_cell(row[h], digits):>14}" for h in header))
    for k, v in extra.items():
        lines.append(f"{k} = {_table_cell(v, 4)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands

def _parse_coding(items):
    coding = {}
    for item in items or ():
        col, sep, ref = item.partition("=")
        if not sep or not col or not ref:
            raise InputError(f"--categorical expects COLUMN=REFERENCE, got {item!r}")
        coding[col] = ref
    return coding


def _dataset(args):
    if args.data is None:
        covs = args.covariates.split(",") if args.covariates else SALARIES_COVARIATES
        if args.outcome not in (None, SALARIES_OUTCOME):
            raise InputError(f"the bundled salary data has outcome {SALARIES_OUTCOME!r}")
        coding = {c: SALARIES_CODING[c] for c in covs if c in SALARIES_CODING}
        coding.update(_parse_coding(args.categorical))
        return build_dataset(salaries_table(), SALARIES_OUTCOME, covs, coding)
    if not args.outcome or args.covariates is None:
        raise InputError("--outcome and --covariates are required with --data")
    covs = [c for c in args.covariates.split(",") if c]
    return build_dataset(load_table(args.data), args.outcome, covs, _parse_coding(args.categorical))


def _fit(args):
    if getattr(args, "fit_json", None):
        try:
            doc = json.loads(Path(args.fit_json).read_text(encoding="utf-8"))
            return RegressionFit.from_dict(doc.get("fit", doc))
        except FileNotFoundError:
            raise InputError(f"file not found: {args.fit_json}") from None
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"{args.fit_json}: not a fit document ({exc})") from None
    return fit_ols(_dataset(args))


def _coef(fit, coef, allow_intercept=False):
    if coef is None:
        if fit.k == 1:
            return 1
        raise InputError("--coef is required when the model has more than one covariate")
    try:
        k = int(coef)
    except ValueError:
        return fit.index_of(coef)
    if k == 0 and not allow_intercept:
        raise InputError("this test is not defined for the intercept")
    return k


def _margin(args, scale):
    if args.lower is not None or args.upper is not None:
        if args.lower is None or args.upper is None or args.delta is not None:
            raise InputError("give --delta, or both --lower and --upper")
        return Margin.interval(args.lower, args.upper, scale)
    if args.delta is None:
        raise InputError("a margin is required (--delta, or --lower/--upper)")
    if scale is Scale.VARIANCE_EXPLAINED:
        return Margin.one_sided(args.delta, scale)
    return Margin.symmetric(args.delta, scale)


def cmd_fit(args):
    return render(_fit(args).to_dict(), args.format, "fit")


def cmd_test(args):
    fit = _fit(args)
    kind = TestKind(args.kind)
    if kind is TestKind.NHST_T:
        res = equivalence.nhst_t(fit, _coef(fit, args.coef, allow_intercept=True))
    elif kind is TestKind.NHST_F:
        res = equivalence.nhst_f(fit, _coef(fit, args.coef))
    elif kind is TestKind.TOST_BETA:
        res = equivalence.tost_beta(fit, _coef(fit, args.coef, allow_intercept=True), _margin(args, Scale.RAW))
    elif kind is TestKind.EQUIV_STD_BETA:
        res = equivalence.equiv_std_beta(fit, _coef(fit, args.coef), _margin(args, Scale.STANDARDIZED))
    elif kind is TestKind.NONINF_DIFFP2:
        res = equivalence.noninf_diffP2(fit, _coef(fit, args.coef), _margin(args, Scale.VARIANCE_EXPLAINED))
    else:
        res = equivalence.noninf_P2(fit, _margin(args, Scale.VARIANCE_EXPLAINED))
    return render(res.to_dict(), args.format, "test")


def cmd_cet(args):
    fit = _fit(args)
    out = equivalence.cet(fit, _coef(fit, args.coef), _margin(args, Scale.STANDARDIZED), args.alpha)
    return render(out.to_dict(), args.format, "cet")


def cmd_bf(args):
    fit = _fit(args)
    k = _coef(fit, args.coef)
    res = bayes.jzs_bf_inclusion(fit, k, bayes.resolve_rscale(args.rscale))
    name = fit.column_names[k - 1] if fit.column_names else f"x{k}"
    full, reduced = "full model", f"model without {name}"
    d = res.to_dict()
    if args.swap:
        full, reduced = reduced, full
        d.update(bf10=res.bf01, bf01=res.bf10, log_bf10=-res.log_bf10)
    d.update(numerator=full, denominator=reduced)
    if args.threshold is not None:
        d["decision"] = bayes.bf_decision(d["bf10"], args.threshold).value
    return render(d, args.format, "bf")


def cmd_simulate(args):
    if args.seed is None:
        raise InputError("simulate requires --seed")
    if (args.scenario_file is None) == (args.preset is None):
        raise InputError("give exactly one of SCENARIO_FILE or --preset")
    if args.preset:
        ref = resources.files("equitest").joinpath("data/scenarios").joinpath(PRESETS[args.preset])
        with resources.as_file(ref) as path:
            doc = _read_json(path)
    else:
        doc = _read_json(args.scenario_file)
    study = args.study or doc.get("study")
    if study not in (1, 2):
        raise InputError("study must be 1 or 2 (set --study or 'study' in the scenario file)")
    specs = simulation.specs_from_document(doc, args.replicates, args.seed)
    if study == 1:
        summary = simulation.run_study1(specs, workers=args.workers)
    else:
        summary = simulation.run_study2(specs, doc.get("deltas", simulation.STUDY2_DELTAS),
                                        doc.get("thresholds", simulation.STUDY2_THRESHOLDS),
                                        workers=args.workers)
    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        csv_path = prefix.with_name(prefix.name + ".csv")
        json_path = prefix.with_name(prefix.name + ".json")
        csv_path.write_text(summary.to_csv(), encoding="utf-8")
        json_path.write_text(summary.to_json(), encoding="utf-8")
        return json.dumps({"study": study, "rows": len(summary.rows),
                           "csv": str(csv_path), "json": str(json_path)}, indent=2) + "\n"
    return summary.to_csv() if args.format == "csv" else summary.to_json()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}, line {exc.lineno}: invalid JSON ({exc.msg})") from None


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p, data=True):
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    p.add_argument("--seed", type=int, help="accepted for uniformity; model analyses are deterministic")
    if not data:
        return
    p.add_argument("--data", help="CSV file with a header row (default: bundled salary data)")
    p.add_argument("--outcome", help="outcome column")
    p.add_argument("--covariates", help="comma-separated covariate columns, in model order")
    p.add_argument("--categorical", action="append", metavar="COLUMN=REFERENCE",
                   help="dummy code COLUMN with REFERENCE as the baseline level (repeatable)")


def _add_fit_source(p):
    p.add_argument("--fit-json", help="use a fit saved by 'equitest fit --json' instead of refitting")


def _add_margin(p):
    p.add_argument("--delta", type=float, help="symmetric margin [-delta, delta], or the one-sided bound")
    p.add_argument("--lower", type=float, help="lower margin bound")
    p.add_argument("--upper", type=float, help="upper margin bound")


def build_parser():
    parser = argparse.ArgumentParser(prog="equitest", description="Equivalence tests for linear regression.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit OLS and print every estimate")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("test", help="run one significance, equivalence or non-inferiority test")
    _add_common(p)
    _add_fit_source(p)
    p.add_argument("--kind", required=True, choices=[t.value for t in TestKind])
    p.add_argument("--coef", help="covariate name or 1-based index (0 = intercept where allowed)")
    _add_margin(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("cet", help="conditional equivalence testing decision")
    _add_common(p)
    _add_fit_source(p)
    p.add_argument("--coef")
    _add_margin(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_cet)

    p = sub.add_parser("bf", help="JZS Bayes factor for including one covariate")
    _add_common(p)
    _add_fit_source(p)
    p.add_argument("--coef")
    p.add_argument("--rscale", default="medium", help="prior scale: medium, wide, ultrawide or a number")
    p.add_argument("--swap", action="store_true", help="report the model without the covariate over the full model")
    p.add_argument("--threshold", type=float, help="also report the decision at this evidence threshold")
    p.set_defaults(func=cmd_bf)

    p = sub.add_parser("simulate", help="run a Monte Carlo study from a scenario file")
    _add_common(p, data=False)
    p.add_argument("scenario_file", nargs="?")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--study", type=int, choices=(1, 2))
    p.add_argument("--replicates", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
    p.set_defaults(func=cmd_simulate)
    return parser


def _error_payload(exc):
    name = type(exc).__name__
    if name.endswith("Error"):
        name = name[: -len("Error")]
    payload = {"error": name, "message": str(exc)}
    if getattr(exc, "max_feasible", None) is not None:
        payload["max_feasible"] = exc.max_feasible
    return payload


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except EquitestError as exc:
        stderr.write(json.dumps(_error_payload(exc)) + "\n")
        return exc.exit_code
    except ValueError as exc:
        # e.g. an unknown rscale name or an out-of-range alpha
        stderr.write(json.dumps(_error_payload(exc)) + "\n")
        return 2
    stdout.write(text)
    return 0


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
