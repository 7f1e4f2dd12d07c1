"""Command line driver.

    bursty-ic region|gdof|simulate|check --config cfg.json --out DIR [--seed N] [--trials N]

Configs are JSON. Exactly one of ``subcarriers`` (list of {n, k}), ``gains``
(list of {gD, gI}) or ``betas`` must be present. Rationals are written as
"num/den" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import capacity_ld, gn_analysis, sim_harness
from .ld_channel import ConfigError, SubcarrierConfig, make_configs
from .report import region_svg
from .results import DecodeFailure
from .state_process import (
    MalformedDistribution,
    UndefinedPartition,
    fractional_partition,
    load_json,
    to_fraction,
    validate,
)

EXIT_OK, EXIT_GAP, EXIT_CONFIG, EXIT_DECODE = 0, 1, 2, 3


@dataclass
class ExperimentConfig:
    raw: dict
    cfgs: list | None = None
    gains: list | None = None
    betas: list | None = None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        present = [k for k in ("subcarriers", "gains", "betas") if k in raw]
        if len(present) != 1:
            raise ConfigError("config needs exactly one of subcarriers, gains, betas")
        out = cls(raw)
        try:
            if "subcarriers" in raw:
                out.cfgs = make_configs(
                    SubcarrierConfig(int(s["n"]), int(s["k"])) for s in raw["subcarriers"]
                )
            elif "gains" in raw:
                out.gains = [gn_analysis.GnSubcarrier(float(g["gD"]), float(g["gI"]))
                             for g in raw["gains"]]
                if not out.gains:
                    raise ConfigError("empty gains list")
            else:
                out.betas = [to_fraction(b) for b in raw["betas"]]
                if not out.betas or any(b < 0 for b in out.betas):
                    raise ConfigError("betas must be a nonempty list of nonnegative values")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed subcarrier entry: {exc}") from exc
        for key in ("N", "N_B", "blocks", "trials"):
            if key in raw and int(raw[key]) < 1:
                raise ConfigError(f"{key} must be positive")
        return out

    @property
    def M(self) -> int:
        return len(self.cfgs or self.gains or self.betas)

    def p(self) -> Fraction:
        if "distribution" in self.raw:
            return self.distribution().p
        if "p" not in self.raw:
            raise ConfigError("config needs p or a distribution")
        p = to_fraction(self.raw["p"])
        if not 0 <= p <= 1:
            raise ConfigError("p must lie in [0, 1]")
        return p

    def distribution(self):
        spec = self.raw.get("distribution")
        if spec is None:
            kind = self.raw.get("dist_kind", "iid")
            spec = {"kind": kind, "M": self.M, "p": str(self.p())}
        dist = load_json(spec)
        rep = validate(dist)
        if not rep:
            raise ConfigError("invalid distribution: " + "; ".join(rep.messages))
        return dist


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def cmd_region(cfg: ExperimentConfig, out: Path, args) -> int:
    p = cfg.p()
    if cfg.cfgs is not None:
        reg = capacity_ld.region(cfg.cfgs, p)
        title = f"capacity region, p={p}, delta={capacity_ld.delta(cfg.cfgs)}"
    elif cfg.gains is not None:
        reg = gn_analysis.gn_region(cfg.gains, p)
        title = f"outer bounds (Gaussian), p={p}"
    else:
        raise ConfigError("region needs subcarriers or gains")
    _write(out, "region.json", reg.dumps())
    _write(out, "region.csv", reg.to_csv())
    _write(out, "region.svg", region_svg(reg, title))
    for c in reg.corners:
        if c.applicable:
            print(f"{c.label}: ({c.r1}, {c.r2})")
    return EXIT_OK


def cmd_gdof(cfg: ExperimentConfig, out: Path, args) -> int:
    if cfg.betas is None:
        raise ConfigError("gdof needs betas")
    ps = cfg.raw.get("p_sweep")
    ps = [to_fraction(x) for x in ps] if ps else [cfg.p()]
    rows = []
    for p in ps:
        g = gn_analysis.gdof(gn_analysis.GdofProfile(tuple(cfg.betas), p))
        rows.append({"p": str(p), "delta_gdof": str(gn_analysis.delta_gdof(cfg.betas)),
                     "gdof": str(g)})
        print(f"p={p}\tgdof={g}")
    _write(out, "gdof.json", json.dumps(rows, indent=2))
    _write(out, "gdof.csv", "p,delta_gdof,gdof\n" + "".join(
        f"{r['p']},{r['delta_gdof']},{r['gdof']}\n" for r in rows))
    return EXIT_OK


def _default_scheme(cfgs) -> str:
    if len(cfgs) > 1:
        return "multicarrier"
    r = cfgs[0].regime()
    if r == "weak":
        return "single_weak"
    if r in ("strong", "two"):
        return "single_strong"
    return "bursty_relay"


def cmd_simulate(cfg: ExperimentConfig, out: Path, args) -> int:
    if cfg.cfgs is None:
        raise ConfigError("simulate needs LD subcarriers")
    raw = cfg.raw
    scheme = raw.get("scheme") or _default_scheme(cfg.cfgs)
    try:
        spec = sim_harness.SchemeSpec(
            scheme, [(c.n, c.k) for c in cfg.cfgs], cfg.p(),
            dist=cfg.distribution(),
            N=int(raw.get("N", 200_000)), N_B=int(raw.get("N_B", 5000)),
            blocks=int(raw.get("blocks", 20)), target=raw.get("target"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    trials = args.trials if args.trials is not None else int(raw.get("trials", 1))
    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
    est = sim_harness.estimate_rates(spec, trials, seed)
    row = sim_harness.report_row(est, raw.get("tolerance"))
    _write(out, "report.json", sim_harness.rows_to_json([row]))
    _write(out, "report.csv", sim_harness.rows_to_csv([row]))
    print(f"{row['scheme']}: mean=({row['mean_r1']:.4f}, {row['mean_r2']:.4f}) "
          f"formula=({row['formula_r1']}, {row['formula_r2']}) gap={row['gap']:.4%} "
          f"verdict={row['verdict']}")
    return EXIT_OK if row["verdict"] == "pass" else EXIT_GAP


def cmd_check(cfg: ExperimentConfig, out: Path, args) -> int:
    if cfg.cfgs is not None:
        ratios = [c.alpha for c in cfg.cfgs]
    elif cfg.betas is not None:
        ratios = cfg.betas
    else:
        raise ConfigError("check needs subcarriers or betas")
    p = cfg.p()
    report = {"separability": gn_analysis.separability(ratios, p)}
    dist = cfg.distribution()
    report["distribution"] = dist.to_json()
    try:
        part = fractional_partition(dist)
        report["partition"] = {
            "weights": {"".join(str(j) for j in sorted(e)): str(w)
                        for e, w in sorted(part.weights.items(), key=lambda kv: sorted(kv[0]))},
            "column_sums": {str(j): str(v) for j, v in part.column_sums.items()},
            "ok": part.ok,
        }
    except UndefinedPartition as exc:
        report["partition"] = {"error": str(exc)}
    _write(out, "check.json", json.dumps(report, indent=2))
    print(json.dumps(report, indent=2))
    return EXIT_OK


COMMANDS = {"region": cmd_region, "gdof": cmd_gdof, "simulate": cmd_simulate, "check": cmd_check}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bursty-ic", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True)
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--trials", type=int)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config)
        return COMMANDS[args.command](cfg, Path(args.out), args)
    except (ConfigError, MalformedDistribution) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DecodeFailure as exc:
        print(f"decode failure: {json.dumps(exc.trace())}", file=sys.stderr)
        return EXIT_DECODE


if __name__ == "__main__":
    sys.exit(main())
