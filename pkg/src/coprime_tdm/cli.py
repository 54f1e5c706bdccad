"""Command-line entry point: ``coprime-tdm {pattern,weights,estimate,schedule,verify}``.

Every option can also come from a JSON experiment file passed with
``--config``; values in the file override flags. Outputs go to stdout, or
into the directory given by ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import golden
from .diffsets import extended_weights, verify_z_relations, weight_closed_form_z2
from .errors import CoprimeTDMError, InvalidParam
from .estimator import SignalModel, acquire, correlogram_psd, estimate_autocorr
from .grid import make_coprime_pair
from .patterns import SCHEMES, build_scheme, combined
from .scheduler import build_schedule, waveform_dump

log = logging.getLogger("coprime_tdm")

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "pair": {
            "type": "object",
            "additionalProperties": False,
            "required": ["m", "n"],
            "properties": {
                "m": {"type": "integer", "minimum": 2},
                "n": {"type": "integer", "minimum": 2},
                "d": {"type": ["number", "string"]},
            },
        },
        "scheme": {"enum": list(SCHEMES)},
        "signal": {"type": "integer", "minimum": 1},
        "num_signals": {"type": "integer", "minimum": 1},
        "ex": {"type": "integer", "minimum": 1},
        "s11": {"type": "integer", "minimum": 0},
        "s12": {"type": "integer", "minimum": 0},
        "span": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 1},
        "hold": {"type": "integer", "minimum": 0},
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["white-noise", "ar1", "sinusoids-plus-noise"]},
                "variance": {"type": "number", "minimum": 0},
                "pole": {"type": "number", "exclusiveMinimum": -1, "exclusiveMaximum": 1},
                "amplitudes": {"type": "array", "items": {"type": "number"}},
                "frequencies": {"type": "array", "items": {"type": "number"}},
            },
        },
        "periods": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "lag_max": {"type": "integer", "minimum": 0},
        "num_freqs": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
    },
}


@dataclass
class ExperimentConfig:
    m: int = 4
    n: int = 3
    d: Fraction = Fraction(1)
    scheme: str = "extended"
    signal: int = 1
    num_signals: int = 2
    ex: int = 1
    s11: int = 0
    s12: int = 0
    span: int | None = None
    q: int | None = None
    hold: int = 1
    model: dict = field(default_factory=lambda: {"kind": "white-noise"})
    periods: int = 1000
    seed: int = 0
    lag_max: int | None = None
    num_freqs: int | None = None
    out: str | None = None

    @classmethod
    def from_sources(cls, args: argparse.Namespace) -> "ExperimentConfig":
        cfg = cls()
        names = {f.name for f in fields(cls)}
        for name in names:
            val = getattr(args, name, None)
            if val is not None:
                setattr(cfg, name, val)
        model = {"kind": getattr(args, "model", None) or "white-noise"}
        for key in ("variance", "pole"):
            if getattr(args, key, None) is not None:
                model[key] = getattr(args, key)
        cfg.model = model
        if getattr(args, "config", None):
            cfg.apply_file(args.config)
        cfg.d = Fraction(cfg.d)
        return cfg

    def apply_file(self, path: str) -> None:
        with open(path) as fh:
            data = json.load(fh)
        try:
            jsonschema.validate(data, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise InvalidParam(f"config {path}: {exc.message}") from None
        pair = data.pop("pair", None)
        if pair:
            self.m, self.n = pair["m"], pair["n"]
            self.d = Fraction(pair.get("d", 1))
        for key, val in data.items():
            setattr(self, key, val)

    @property
    def pair(self):
        return make_coprime_pair(self.m, self.n, self.d)

    def patterns(self):
        return build_scheme(self.pair, self.scheme, ex=self.ex, s11=self.s11, s12=self.s12,
                            span=self.span, q=self.q, num_signals=self.num_signals)


def _num(x) -> str:
    x = float(x)
    return "nan" if np.isnan(x) else repr(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: ExperimentConfig, files: dict[str, str], primary: str) -> None:
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            with open(out / name, "w", newline="\n") as fh:
                fh.write(text)
            log.info("wrote %s", out / name)
    else:
        sys.stdout.write(files[primary])


def cmd_pattern(cfg: ExperimentConfig, fmt: str = "json") -> int:
    pats = cfg.patterns()
    sid = f"x{cfg.signal}"
    branches = [p for p in pats if p.signal_id == sid]
    if not branches:
        raise InvalidParam(f"scheme {cfg.scheme!r} has no signal {cfg.signal}")
    merged = combined(pats, sid)
    doc = {
        "scheme": cfg.scheme,
        "pair": {"m": cfg.m, "n": cfg.n, "d": str(cfg.d)},
        "signal_id": sid,
        "branches": [p.to_dict() for p in branches],
        "combined": merged.to_dict(),
        "overlap": list(merged.overlap),
    }
    ind = merged.indicator()
    q = merged.grid.q
    rows = [(k, _num(k / q), int(v)) for k, v in enumerate(ind)]
    files = {"pattern.json": json.dumps(doc, indent=2) + "\n",
             "indicator.csv": _csv(("tick", "time", "indicator"), rows)}
    _emit(cfg, files, "indicator.csv" if fmt == "csv" else "pattern.json")
    return 0


def cmd_weights(cfg: ExperimentConfig, fmt: str = "csv") -> int:
    pair = cfg.pair
    z1, z2 = extended_weights(pair)
    L = z1.lag_max
    rows, all_match = [], True
    for l in range(-L, L + 1):
        cf = weight_closed_form_z2(pair, l)
        match = cf == z2(l)
        all_match &= match
        rows.append((l, z1(l), z2(l), cf, "true" if match else "false"))
    report = verify_z_relations(pair)
    text = "\n".join(report.lines()) + "\n"
    files = {"weights.csv": _csv(("lag", "z1", "z2", "closed_form_z2", "match"), rows),
             "relations.txt": text}
    _emit(cfg, files, "weights.csv")
    if not cfg.out:
        sys.stderr.write(text)
    return 0 if all_match and report.passed else 1


def cmd_estimate(cfg: ExperimentConfig, fmt: str = "csv") -> int:
    pats = cfg.patterns()
    pattern = combined(pats, f"x{cfg.signal}")
    model = SignalModel.from_dict({**cfg.model, "seed": cfg.seed})
    lag_max = cfg.lag_max if cfg.lag_max is not None else pattern.grid.span_ticks - 1
    rec = acquire(model, pattern, cfg.periods)
    est = estimate_autocorr(rec, lag_max)
    truth = model.autocorr(est.lags)
    rows = [(l, _num(v), c, _num(t))
            for l, v, c, t in zip(est.lags.tolist(), est.values, est.counts.tolist(), truth)]
    files = {"estimate.csv": _csv(("lag", "estimate", "count", "analytic_truth"), rows)}
    if cfg.num_freqs:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            psd = correlogram_psd(est, cfg.num_freqs)
        for w in caught:
            log.warning("%s", w.message)
        omega = 2 * np.pi * np.arange(cfg.num_freqs) / cfg.num_freqs
        files["psd.csv"] = _csv(("k", "omega", "psd"),
                                [(k, _num(o), _num(p)) for k, (o, p) in enumerate(zip(omega, psd))])
    _emit(cfg, files, "psd.csv" if fmt == "psd" and cfg.num_freqs else "estimate.csv")
    return 0


def cmd_schedule(cfg: ExperimentConfig, fmt: str = "json") -> int:
    pats = cfg.patterns()
    schedules = build_schedule(pats, hold=cfg.hold)
    span = max(p.grid.span_ticks for p in pats)
    files = {"schedule.json": json.dumps([s.to_dict() for s in schedules], indent=2) + "\n",
             "waveform.txt": waveform_dump(schedules, span)}
    _emit(cfg, files, "waveform.txt" if fmt == "waveform" else "schedule.json")
    return 0


def cmd_verify(cfg: ExperimentConfig | None = None, fmt: str = "text") -> int:
    checks = golden.run_all()
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.ok]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


COMMANDS = {"pattern": cmd_pattern, "weights": cmd_weights, "estimate": cmd_estimate,
            "schedule": cmd_schedule, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=Fraction, help="Nyquist period, e.g. 1 or 1/2")
    common.add_argument("--scheme", choices=SCHEMES)
    common.add_argument("--signal", type=int)
    common.add_argument("--num-signals", dest="num_signals", type=int)
    common.add_argument("--ex", type=int)
    common.add_argument("--s11", type=int)
    common.add_argument("--s12", type=int)
    common.add_argument("--span", type=int, help="window length in ticks")
    common.add_argument("--q", type=int, help="ticks per Nyquist period")
    common.add_argument("--hold", type=int, help="switch aperture in ticks")
    common.add_argument("--periods", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--lag-max", dest="lag_max", type=int)
    common.add_argument("--num-freqs", dest="num_freqs", type=int)
    common.add_argument("--model", choices=("white-noise", "ar1", "sinusoids-plus-noise"))
    common.add_argument("--variance", type=float)
    common.add_argument("--pole", type=float)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "psd", "waveform", "text"))
    common.add_argument("--out", help="output directory")
    common.add_argument("--config", help="JSON experiment file; overrides flags")

    parser = argparse.ArgumentParser(prog="coprime-tdm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _setup_logging() -> None:
    level = os.environ.get("COPRIME_TDM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING) if not level.isdigit() else int(level),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_sources(args)
        handler = COMMANDS[args.command]
        return handler(cfg, args.fmt) if args.fmt else handler(cfg)
    except (CoprimeTDMError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
