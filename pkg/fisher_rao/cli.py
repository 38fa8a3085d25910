"""Command-line front end.

Every command selects a family with ``--family`` (plus ``--n`` / ``--dim``
where the family needs them) and reads points from repeated ``--point``
options (comma-separated coordinates) or a CSV file given by ``--points``.
Results go to stdout as JSON, or CSV for ``geodesic``; diagnostics go to
stderr. Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from itertools import combinations
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from pydantic import ValidationError

from fisher_rao._config import SolverConfig, resolve_solver_config
from fisher_rao._logging import LOG_FORMAT, logger
from fisher_rao._types import FloatArray
from fisher_rao._version import __version__
from fisher_rao.exceptions import DomainError, FisherRaoError, NumericalError
from fisher_rao.families import InformationManifold, Normal, family_from_spec
from fisher_rao.generic import fisher_matrix
from fisher_rao.geometry import GeodesicPath, euclidean_spec
from fisher_rao.learning import knn_classify, riemannian_kmeans
from fisher_rao.types import (
    CurvatureReport,
    DistanceReport,
    FamilySpec,
    KMeansReport,
    KnnReport,
    MetricReport,
    PairDistance,
    PdfReport,
    SampleReport,
)

__all__ = ["build_parser", "main"]

LABEL_COLUMN = "label"


# ── input ───────────────────────────────────────────────────────────────────


def _parse_vector(text: str) -> FloatArray:
    try:
        return np.array([float(v) for v in text.replace(";", ",").split(",")])
    except ValueError:
        raise DomainError(f"cannot parse {text!r} as comma-separated numbers") from None


def read_points(path: str | Path) -> tuple[list[FloatArray], list[int] | None]:
    """Rows of a point CSV and its optional ``label`` column.

    A header row is recognized by any non-numeric cell.
    """
    file = Path(path)
    if not file.exists():
        raise DomainError(f"point file not found: {file}")
    with file.open(newline="", encoding="utf-8") as handle:
        rows = [row for row in csv.reader(handle) if any(c.strip() for c in row)]
    if not rows:
        raise DomainError(f"point file {file} is empty")

    label_at: int | None = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip().lower() for c in rows[0]]
        rows = rows[1:]
        label_at = header.index(LABEL_COLUMN) if LABEL_COLUMN in header else None

    points: list[FloatArray] = []
    labels: list[int] = []
    for line_no, row in enumerate(rows, 2 if label_at is not None else 1):
        cells = [c.strip() for c in row]
        try:
            if label_at is not None:
                labels.append(int(float(cells.pop(label_at))))
            points.append(np.array([float(c) for c in cells]))
        except (ValueError, IndexError):
            raise DomainError(f"{file}: malformed row {line_no}: {row!r}") from None
    return points, (labels if label_at is not None else None)


def _collect_points(
    args: argparse.Namespace,
) -> tuple[list[FloatArray], list[int] | None]:
    points = [_parse_vector(p) for p in args.point or []]
    labels = None
    if args.points:
        file_points, labels = read_points(args.points)
        points.extend(file_points)
        if labels is not None and args.point:
            raise DomainError("labels need all points to come from the file")
    return points, labels


def _require(
    points: Sequence[Any], count: int, command: str, *, exact: bool = False
) -> None:
    if len(points) < count or (exact and len(points) != count):
        need = f"exactly {count}" if exact else f"at least {count}"
        raise DomainError(f"{command} needs {need} point(s), got {len(points)}")


def _flat(value: Any) -> list[float]:
    return [float(v) for v in np.asarray(value, dtype=np.float64).reshape(-1)]


# ── commands ────────────────────────────────────────────────────────────────


def cmd_dist(args: argparse.Namespace, family: InformationManifold) -> int:
    points, _ = _collect_points(args)
    _require(points, 2, "dist")
    if args.legacy_halfplane and not isinstance(family, Normal):
        raise DomainError("--legacy-halfplane applies to the normal family only")
    measure = family.legacy_halfplane_dist if args.legacy_halfplane else family.dist
    if args.pair is not None:
        i, j = args.pair
        if not (0 <= i < len(points) and 0 <= j < len(points)):
            raise DomainError(f"pair ({i}, {j}) is out of range for {len(points)}")
        pairs = [(i, j)]
    else:
        pairs = list(combinations(range(len(points)), 2))

    report = DistanceReport(
        family=family.name,
        metric="legacy-halfplane" if args.legacy_halfplane else "fisher-rao",
    )
    failed = 0
    for i, j in pairs:
        try:
            value = measure(points[i], points[j])
        except NumericalError as exc:
            message = f"pair ({i}, {j}): {exc}"
            print(f"error: {message}", file=sys.stderr)
            report.pairs.append(PairDistance(i=i, j=j, error=message))
            failed += 1
            continue
        except FisherRaoError as exc:
            exc.args = (f"pair ({i}, {j}): {exc}",) + exc.args[1:]
            raise
        report.pairs.append(PairDistance(i=i, j=j, distance=value))
    print(report.model_dump_json(indent=2))
    return NumericalError.exit_code if failed else 0


def _write_path(writer: Any, path: GeodesicPath, prefix: list[Any]) -> None:
    for t, point, speed in zip(path.times, path.points, path.speeds):
        cells = [float(t), *_flat(point), float(speed)]
        writer.writerow(prefix + [repr(c) for c in cells])


def cmd_geodesic(args: argparse.Namespace, family: InformationManifold) -> int:
    points, _ = _collect_points(args)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if args.sphere is not None:
        _require(points, 1, "geodesic --sphere", exact=True)
        rays = family.geodesic_sphere(points[0], args.sphere, args.rays, args.samples)
        width = len(_flat(rays[0].points[0]))
        writer.writerow(["ray", "t"] + [f"x{k + 1}" for k in range(width)] + ["speed"])
        for index, ray in enumerate(rays):
            _write_path(writer, ray, [index])
        return 0

    _require(points, 2, "geodesic", exact=True)
    path = family.geodesic(points[0], points[1], args.samples, tangent=args.tangent)
    width = len(_flat(path.points[0]))
    writer.writerow(["t"] + [f"x{k + 1}" for k in range(width)] + ["speed"])
    _write_path(writer, path, [])
    return 0


def _single_point(args: argparse.Namespace, command: str) -> FloatArray:
    points, _ = _collect_points(args)
    _require(points, 1, command, exact=True)
    return points[0]


def cmd_curvature(args: argparse.Namespace, family: InformationManifold) -> int:
    point = _single_point(args, "curvature")
    value = (
        family.numeric_sectional_curvature(point)
        if args.numeric
        else family.sectional_curvature(point)
    )
    report = CurvatureReport(
        family=family.name, point=_flat(point), curvature=value, numeric=args.numeric
    )
    print(report.model_dump_json(indent=2))
    return 0


def cmd_metric(args: argparse.Namespace, family: InformationManifold) -> int:
    point = _single_point(args, "metric")
    if args.numeric:
        try:
            model = family.density_model()
        except NotImplementedError as exc:
            raise DomainError(str(exc)) from None
        x = family.to_coordinates(point)
        matrix = fisher_matrix(model, x, config=family.config)
    else:
        matrix = family.metric_matrix(point)
    report = MetricReport(
        family=family.name,
        point=_flat(point),
        matrix=np.asarray(matrix).tolist(),
        numeric=args.numeric,
    )
    print(report.model_dump_json(indent=2))
    return 0


def cmd_sample(args: argparse.Namespace, family: InformationManifold) -> int:
    point = _single_point(args, "sample")
    draws = np.asarray(family.sample(point, args.count, rng=args.seed), dtype=float)
    report = SampleReport(
        family=family.name, point=_flat(point), seed=args.seed, samples=draws.tolist()
    )
    print(report.model_dump_json(indent=2))
    return 0


def cmd_pdf(args: argparse.Namespace, family: InformationManifold) -> int:
    point = _single_point(args, "pdf")
    if not args.x:
        raise DomainError("pdf needs at least one --x observation")
    density = family.pdf(point)
    xs: list[Any] = []
    values: list[float] = []
    for text in args.x:
        obs = _parse_vector(text)
        x = float(obs[0]) if obs.size == 1 else obs
        xs.append(x if isinstance(x, float) else _flat(x))
        values.append(float(density(x)))
    report = PdfReport(family=family.name, point=_flat(point), xs=xs, densities=values)
    print(report.model_dump_json(indent=2))
    return 0


def _chart_rows(
    family: InformationManifold, points: Sequence[FloatArray]
) -> FloatArray:
    return np.array([family.to_coordinates(p) for p in points])


def cmd_kmeans(args: argparse.Namespace, family: InformationManifold) -> int:
    points, _ = _collect_points(args)
    _require(points, 1, "kmeans")
    x = _chart_rows(family, points)
    spec = euclidean_spec(family.dim, family.config) if args.euclidean else family.spec
    result = riemannian_kmeans(
        x, spec, args.k, seed=args.seed, max_iter=args.max_iter, n_init=args.n_init
    )
    report = KMeansReport(
        family=family.name,
        metric="euclidean" if args.euclidean else "fisher-rao",
        k=args.k,
        seed=args.seed,
        centroids=[_flat(family.from_coordinates(c)) for c in result.centroids],
        labels=result.labels.tolist(),
        inertia=result.inertia,
        n_iter=result.n_iter,
        reseeds=result.reseeds,
    )
    print(report.model_dump_json(indent=2))
    return 0


def cmd_knn(args: argparse.Namespace, family: InformationManifold) -> int:
    train, train_labels = read_points(args.train)
    if train_labels is None:
        raise DomainError(f"training file {args.train} has no {LABEL_COLUMN!r} column")
    test, test_labels = read_points(args.test)
    spec = euclidean_spec(family.dim, family.config) if args.euclidean else family.spec
    predictions = knn_classify(
        _chart_rows(family, train),
        train_labels,
        _chart_rows(family, test),
        spec,
        args.k,
    )
    accuracy = None
    if test_labels is not None:
        accuracy = float(np.mean(predictions == np.asarray(test_labels)))
    report = KnnReport(
        family=family.name,
        metric="euclidean" if args.euclidean else "fisher-rao",
        k=args.k,
        predictions=predictions.tolist(),
        accuracy=accuracy,
    )
    print(report.model_dump_json(indent=2))
    return 0


# ── parser ──────────────────────────────────────────────────────────────────


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--family", required=True, help="Family name, e.g. beta.")
    parent.add_argument("--n", type=int, help="Trials (binomial, multinomial).")
    parent.add_argument(
        "--dim", type=int, help="Categories, Dirichlet parameters or data dimension."
    )
    parent.add_argument(
        "--point", action="append", help="Comma-separated coordinates; repeatable."
    )
    parent.add_argument("--points", help="CSV file with one point per row.")
    parent.add_argument("--env-file", help="Env file with FISHER_RAO_* settings.")
    parent.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Diagnostics written to stderr.",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fisher-rao", description="Fisher-Rao geometry of parametric families."
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("dist", parents=[common], help="Geodesic distances.")
    p.add_argument(
        "--pair", type=int, nargs=2, metavar=("I", "J"), help="Only this pair."
    )
    p.add_argument(
        "--legacy-halfplane",
        action="store_true",
        help="Normal family: distance of the unscaled half-plane formula.",
    )
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser("geodesic", parents=[common], help="Sampled geodesic as CSV.")
    p.add_argument("--samples", type=int, help="Number of segments (rows minus one).")
    p.add_argument(
        "--tangent", action="store_true", help="Second point is an initial velocity."
    )
    p.add_argument("--sphere", type=float, metavar="R", help="Geodesic sphere radius.")
    p.add_argument("--rays", type=int, default=16, help="Rays of the geodesic sphere.")
    p.set_defaults(handler=cmd_geodesic)

    p = sub.add_parser("curvature", parents=[common], help="Sectional curvature.")
    p.add_argument(
        "--numeric", action="store_true", help="Use the numeric Riemann tensor."
    )
    p.set_defaults(handler=cmd_curvature)

    p = sub.add_parser("metric", parents=[common], help="Fisher information matrix.")
    p.add_argument(
        "--numeric", action="store_true", help="Integrate the density numerically."
    )
    p.set_defaults(handler=cmd_metric)

    p = sub.add_parser("sample", parents=[common], help="Draw samples.")
    p.add_argument("--count", type=int, default=1, help="Number of draws.")
    p.add_argument("--seed", type=int, help="Random seed.")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("pdf", parents=[common], help="Evaluate the density.")
    p.add_argument(
        "--x", action="append", help="Observation (comma-separated if a vector)."
    )
    p.set_defaults(handler=cmd_pdf)

    p = sub.add_parser("kmeans", parents=[common], help="Riemannian k-means.")
    p.add_argument("--k", type=int, required=True, help="Number of clusters.")
    p.add_argument("--seed", type=int, help="Random seed.")
    p.add_argument("--max-iter", type=int, default=100, help="Iteration cap.")
    p.add_argument("--n-init", type=int, default=1, help="Seeded restarts.")
    p.add_argument(
        "--euclidean", action="store_true", help="Use plain coordinate distance."
    )
    p.set_defaults(handler=cmd_kmeans)

    p = sub.add_parser("knn", parents=[common], help="k-nearest-neighbour labels.")
    p.add_argument("--train", required=True, help="CSV with a label column.")
    p.add_argument("--test", required=True, help="CSV of points to classify.")
    p.add_argument("--k", type=int, default=10, help="Number of neighbours.")
    p.add_argument(
        "--euclidean", action="store_true", help="Use plain coordinate distance."
    )
    p.set_defaults(handler=cmd_knn)
    return parser


def _attach_stderr(level: str) -> logging.Handler | None:
    if logger.handlers:
        return None
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, level))
    return handler


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = _attach_stderr(args.log_level)
    try:
        config: SolverConfig = resolve_solver_config(env_file=args.env_file)
        spec = FamilySpec(family=args.family, n=args.n, dim=args.dim)
        family = family_from_spec(spec, config)
        return int(args.handler(args, family))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FisherRaoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except NotImplementedError as exc:
        print(f"error: {exc or 'not supported by this family'}", file=sys.stderr)
        return 2
    finally:
        if handler is not None:
            logger.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
