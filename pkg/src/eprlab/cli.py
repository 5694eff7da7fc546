"""Scenario-driven command line front end.

A scenario is a JSON file with a top-level ``kind`` discriminator::

    {
      "kind": "SPIN_CHSH" | "EPR_QUADRATURE" | "FREE_EVOLUTION",
      "name": "output base name (default: file stem)",
      "state": {"squeezing": 1.0} or
               {"moments": {"qq": ..., "pq": ..., "qp": ..., "pp": ...}},
      "settings": {"pairs": [[s1, s2], ...]} or
                  {"setting1": {"start": ..., "stop": ..., "count": ...},
                   "setting2": {"value": ...}},
      "samples": 100000,
      "seed": 7,
      "chsh": {"a": ..., "a_prime": ..., "b": ..., "b_prime": ...}
    }

All angles are radians. SPIN_CHSH settings are angles of directions in
the x-z plane and need no ``state``; EPR_QUADRATURE settings are
quadrature angles; FREE_EVOLUTION settings are times. Scan axes are
expanded to a Cartesian product with ``setting1`` as the outer loop.

For every setting pair the tool evaluates the exact quantum correlation,
the model's exact expectation, and a seeded Monte Carlo estimate, then
writes ``<name>.csv`` and ``<name>.summary.json``. Exit codes: 0 on
success, 1 on input errors, 2 when the model and the quantum value
disagree beyond tolerance on any row.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .correlators import (
    ChshSettings,
    QuadratureSetting,
    TimeSetting,
    chsh_value,
    free_evolution_correlation,
    quadrature_correlation,
    spin_correlation,
)
from .errors import ScenarioError, ValidationError
from .estimator import compare, mc_estimate
from .gaussian import MomentMatrix, extract_moments, tmsv
from .lhv import (
    exact_expectation,
    free_evolution_model,
    quadrature_model,
    sup_bound,
    unbounded_spin_model,
)
from .operators import UnitVector3

KINDS = ("SPIN_CHSH", "EPR_QUADRATURE", "FREE_EVOLUTION")
CSV_COLUMNS = ("setting1", "setting2", "quantum", "lhv_exact", "lhv_mc", "stderr", "z")
CONSISTENCY_TOL = 1e-10

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONSISTENT = 2

_MAX_SEED = 1 << 64
_TOP_KEYS = {"kind", "name", "state", "settings", "samples", "seed", "chsh"}


@dataclass(frozen=True)
class Scenario:
    kind: str
    name: str
    moments: MomentMatrix | None
    setting_pairs: tuple[tuple[float, float], ...]
    samples: int
    seed: int
    chsh: tuple[float, float, float, float] | None


@dataclass(frozen=True)
class ResultRow:
    setting1: float
    setting2: float
    quantum: float
    lhv_exact: float
    lhv_mc: float
    stderr: float
    z: float


def _require_number(value, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{label} must be a number, got {value!r}")
    return float(value)


def _axis_values(axis, label: str) -> list[float]:
    if not isinstance(axis, dict):
        raise ScenarioError(f"{label} must be an object with 'value' or 'start'/'stop'/'count'")
    if set(axis) == {"value"}:
        return [_require_number(axis["value"], f"{label}.value")]
    if set(axis) == {"start", "stop", "count"}:
        start = _require_number(axis["start"], f"{label}.start")
        stop = _require_number(axis["stop"], f"{label}.stop")
        count = axis["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ScenarioError(f"{label}.count must be an integer >= 2, got {count!r}")
        if start == stop:
            raise ScenarioError(f"{label}: scan range needs start != stop")
        return [float(v) for v in np.linspace(start, stop, count)]
    raise ScenarioError(f"{label} keys must be exactly {{'value'}} or {{'start','stop','count'}}")


def _parse_settings(data, kind: str) -> tuple[tuple[float, float], ...]:
    if not isinstance(data, dict):
        raise ScenarioError("'settings' must be an object")
    if set(data) == {"pairs"}:
        pairs = data["pairs"]
        if not isinstance(pairs, list) or not pairs:
            raise ScenarioError("'settings.pairs' must be a non-empty list of [s1, s2] pairs")
        out = []
        for i, pair in enumerate(pairs):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ScenarioError(f"settings.pairs[{i}] must be a [s1, s2] pair")
            out.append((_require_number(pair[0], f"settings.pairs[{i}][0]"),
                        _require_number(pair[1], f"settings.pairs[{i}][1]")))
        return tuple(out)
    if set(data) == {"setting1", "setting2"}:
        values1 = _axis_values(data["setting1"], "settings.setting1")
        values2 = _axis_values(data["setting2"], "settings.setting2")
        return tuple((v1, v2) for v1 in values1 for v2 in values2)
    raise ScenarioError(
        "'settings' must contain either 'pairs' or both 'setting1' and 'setting2'"
    )


def _parse_state(data, kind: str) -> MomentMatrix | None:
    if kind == "SPIN_CHSH":
        if data is not None:
            raise ScenarioError("SPIN_CHSH uses the two-spin singlet; omit 'state'")
        return None
    if not isinstance(data, dict):
        raise ScenarioError(f"{kind} needs a 'state' object with 'squeezing' or 'moments'")
    if set(data) == {"squeezing"}:
        r = _require_number(data["squeezing"], "state.squeezing")
        return extract_moments(tmsv(r))
    if set(data) == {"moments"}:
        block = data["moments"]
        if not isinstance(block, dict) or set(block) != {"qq", "pq", "qp", "pp"}:
            raise ScenarioError("state.moments must carry exactly the keys qq, pq, qp, pp")
        return MomentMatrix(**{k: _require_number(v, f"state.moments.{k}")
                               for k, v in block.items()})
    raise ScenarioError("'state' keys must be exactly {'squeezing'} or {'moments'}")


def _parse_chsh(data, kind: str) -> tuple[float, float, float, float] | None:
    if data is None:
        return None
    if kind == "FREE_EVOLUTION":
        raise ScenarioError("the 'chsh' block applies to SPIN_CHSH and EPR_QUADRATURE only")
    if not isinstance(data, dict) or set(data) != {"a", "a_prime", "b", "b_prime"}:
        raise ScenarioError("'chsh' must carry exactly the keys a, a_prime, b, b_prime")
    return tuple(_require_number(data[k], f"chsh.{k}")
                 for k in ("a", "a_prime", "b", "b_prime"))


def load_scenario(path: Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"'kind' must be one of {KINDS}, got {kind!r}")
    name = data.get("name", path.stem)
    if not isinstance(name, str) or not name:
        raise ScenarioError(f"'name' must be a non-empty string, got {name!r}")
    samples = data.get("samples")
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        raise ScenarioError(f"'samples' must be an integer >= 2, got {samples!r}")
    seed = data.get("seed")
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < _MAX_SEED:
        raise ScenarioError(f"'seed' must be a 64-bit unsigned integer, got {seed!r}")
    return Scenario(
        kind=kind,
        name=name,
        moments=_parse_state(data.get("state"), kind),
        setting_pairs=_parse_settings(data.get("settings"), kind),
        samples=samples,
        seed=seed,
        chsh=_parse_chsh(data.get("chsh"), kind),
    )


def _spin_direction(theta: float) -> UnitVector3:
    """Direction in the x-z plane at angle theta from the z axis."""
    return UnitVector3(math.sin(theta), 0.0, math.cos(theta))


def _build_engine(scenario: Scenario):
    """Returns (model, make_setting, quantum_correlation_on_settings)."""
    if scenario.kind == "SPIN_CHSH":
        return unbounded_spin_model(), _spin_direction, spin_correlation
    m = scenario.moments
    if scenario.kind == "EPR_QUADRATURE":
        def quantum(s1, s2):
            return quadrature_correlation(m, s1, s2)
        return quadrature_model(m), QuadratureSetting, quantum

    def quantum(s1, s2):
        return free_evolution_correlation(m, s1, s2)
    return free_evolution_model(m), TimeSetting, quantum


def _evaluate(scenario: Scenario, workers: int) -> tuple[list[ResultRow], dict]:
    model, make, quantum = _build_engine(scenario)
    rows = []
    for index, (x1, x2) in enumerate(scenario.setting_pairs):
        s1, s2 = make(x1), make(x2)
        q = quantum(s1, s2)
        exact = exact_expectation(model, s1, s2)
        est = mc_estimate(model, s1, s2, scenario.samples,
                          (scenario.seed + index) % _MAX_SEED, workers=workers)
        report = compare(exact, est)
        rows.append(ResultRow(x1, x2, q, exact, est.mean, est.stderr, report.z_score))

    chsh_quantum = chsh_lhv = None
    if scenario.chsh is not None:
        settings = ChshSettings(*(make(theta) for theta in scenario.chsh))
        chsh_quantum = chsh_value(quantum, settings)
        chsh_lhv = chsh_value(lambda u, v: exact_expectation(model, u, v), settings)

    bound = sup_bound(model)
    consistency_pass = all(abs(r.lhv_exact - r.quantum) <= CONSISTENCY_TOL for r in rows)
    summary = {
        "chsh_quantum": chsh_quantum,
        "chsh_lhv_exact": chsh_lhv,
        "sup_bound": bound if math.isfinite(bound) else "unbounded",
        "max_abs_z": max(abs(r.z) for r in rows),
        "consistency_pass": consistency_pass,
    }
    return rows, summary


def _write_csv(path: Path, rows: list[ResultRow]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(format(v, ".17g") for v in
                            (r.setting1, r.setting2, r.quantum, r.lhv_exact,
                             r.lhv_mc, r.stderr, r.z))


def _print_table(rows: list[ResultRow], summary: dict) -> None:
    header = f"{'setting1':>12} {'setting2':>12} {'quantum':>12} {'lhv_exact':>12} " \
             f"{'lhv_mc':>12} {'stderr':>10} {'z':>7}"
    print(header)
    for r in rows:
        print(f"{r.setting1:>12.6g} {r.setting2:>12.6g} {r.quantum:>12.6g} "
              f"{r.lhv_exact:>12.6g} {r.lhv_mc:>12.6g} {r.stderr:>10.3g} {r.z:>7.2f}")
    if summary["chsh_quantum"] is not None:
        print(f"CHSH: quantum = {summary['chsh_quantum']:.9g}, "
              f"model exact = {summary['chsh_lhv_exact']:.9g}")
    print(f"sup bound = {summary['sup_bound']}, max |z| = {summary['max_abs_z']:.3g}, "
          f"consistency_pass = {summary['consistency_pass']}")


def run_scenario(path: Path, out_dir: Path | None = None, seed: int | None = None,
                 samples: int | None = None, workers: int = 1) -> int:
    """Execute a scenario file and write its CSV and summary outputs.

    ``seed`` and ``samples`` override the file values when given.
    """
    scenario = load_scenario(Path(path))
    if seed is not None:
        if not 0 <= seed < _MAX_SEED:
            raise ScenarioError(f"--seed must be a 64-bit unsigned integer, got {seed}")
        scenario = dataclasses.replace(scenario, seed=seed)
    if samples is not None:
        if samples < 2:
            raise ScenarioError(f"--samples must be >= 2, got {samples}")
        scenario = dataclasses.replace(scenario, samples=samples)
    if workers < 1:
        raise ScenarioError(f"--workers must be >= 1, got {workers}")

    rows, summary = _evaluate(scenario, workers)

    out = Path(out_dir) if out_dir is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{scenario.name}.csv"
    summary_path = out / f"{scenario.name}.summary.json"
    _write_csv(csv_path, rows)
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    _print_table(rows, summary)
    print(f"wrote {csv_path} and {summary_path}")
    if not summary["consistency_pass"]:
        print("error: model expectation deviates from the quantum value beyond "
              f"{CONSISTENCY_TOL}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eprlab",
        description="Quantum two-party correlations vs separated-random-process models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="execute a scenario JSON file")
    run_parser.add_argument("scenario", type=Path, help="path to the scenario JSON file")
    run_parser.add_argument("--out-dir", type=Path, default=None,
                            help="directory for result files (default: current directory)")
    run_parser.add_argument("--seed", type=int, default=None,
                            help="override the scenario seed")
    run_parser.add_argument("--samples", type=int, default=None,
                            help="override the scenario sample count")
    run_parser.add_argument("--workers", type=int, default=1,
                            help="worker threads for Monte Carlo blocks (never changes results)")
    args = parser.parse_args(argv)
    try:
        return run_scenario(args.scenario, out_dir=args.out_dir, seed=args.seed,
                            samples=args.samples, workers=args.workers)
    except (ScenarioError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
