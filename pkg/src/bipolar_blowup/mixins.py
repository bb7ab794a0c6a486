import logging
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, TextIO

import numpy as np

from . import asymptotics, geometry, validation
from .boundary_data import harmonic_extension
from .objs.config_objs import RunConfig
from .objs.geometry_objs import BipolarFrame, DiskPairGeometry
from .objs.task_objs import TableOutput
from .reflection_solver import ReflectionSeriesConfig, reflection_points
from .spectral_reference import eval_mode_points, solve_modes
from .utils import in_separate_thread

logger = logging.getLogger(__name__)

CSV_FORMAT = "%.17g"


def frame_for(config: RunConfig, eps: float) -> BipolarFrame:
    return geometry.derive_frame(DiskPairGeometry(r_i=config.geometry.r_i, r_e=config.geometry.r_e, eps=eps))


def series_config(config: RunConfig) -> ReflectionSeriesConfig:
    return ReflectionSeriesConfig(tol=config.tolerances.reflection, n_max=config.tolerances.reflection_n_max)


def _metadata(config: RunConfig, frames: List[BipolarFrame]) -> Dict[str, str]:
    metadata = {"config": config.json(sort_keys=True)}
    for j, frame in enumerate(frames):
        metadata[f"frame[{j}]"] = frame.json(sort_keys=True)
    return metadata


class TableWriterMixin:
    out: Optional[Path] = None

    def write_table(self, table: TableOutput) -> None:
        if self.out is None:
            self._write(table, sys.stdout)
            return
        self.out.parent.mkdir(parents=True, exist_ok=True)
        with open(self.out, "w", encoding="utf-8", newline="\n") as file:
            self._write(table, file)
        logger.info(f"{table.task}: {len(table.rows)} rows written to {self.out}")

    @staticmethod
    def _write(table: TableOutput, file: TextIO) -> None:
        for key, value in table.metadata.items():
            file.write(f"# {key}: {value}\n")
        file.write(",".join(table.columns) + "\n")
        if table.rows.size:
            np.savetxt(file, table.rows, fmt=CSV_FORMAT, delimiter=",")


class BaseTaskMixin:
    pass


class SolveTasksMixin(BaseTaskMixin):
    def run_solve(self, config: RunConfig) -> TableOutput:
        """
        Value and gradient of the total field at the configured untranslated points,
        by the spectral solver, with the reflection series as a cross-check.
        """
        field = harmonic_extension(config.boundary_data.to_data(config.geometry.r_e))
        kind = config.boundary_data.kind
        points = np.array([complex(x1, x2) for x1, x2 in config.grid.points])
        rows, frames, passed = [], [], True
        for eps, k in config.schedule():
            frame = frame_for(config, eps)
            frames.append(frame)
            z = points + frame.x_0
            exact = eval_mode_points(solve_modes(frame, k, field, kind, tol=config.tolerances.spectral), z)
            series = reflection_points(frame, k, field, kind, z, series_config(config))
            scale = max(1.0, float(np.max(np.abs(exact.gradient))))
            gap = np.abs(series.gradient - exact.gradient) / scale
            passed = passed and bool(np.all(gap <= config.tolerances.solver_agreement))
            for j, x in enumerate(points):
                rows.append([eps, k, x.real, x.imag, exact.xi[j], exact.theta[j], exact.value[j],
                             exact.gradient[j].real, exact.gradient[j].imag, exact.grad_xi[j], exact.grad_theta[j], gap[j]])
        return TableOutput(
            task="solve",
            columns=["eps", "k", "x1", "x2", "xi", "theta", "value", "grad_x1", "grad_x2", "grad_xi", "grad_theta",
                     "solver_gap"],
            rows=np.array(rows),
            metadata=_metadata(config, frames),
            passed=passed,
        )


class ProfileTasksMixin(BaseTaskMixin):
    def run_boundary_profile(self, config: RunConfig) -> TableOutput:
        eps, k = config.schedule()[0]
        frame = frame_for(config, eps)
        field = harmonic_extension(config.boundary_data.to_data(frame.r_e))
        profile = asymptotics.boundary_profile(
            frame,
            k,
            field,
            config.boundary_data.kind,
            side=config.grid.profile_side,
            n_theta=config.grid.profile_points,
            cfg=series_config(config),
            tol=config.tolerances.spectral,
        )
        metadata = _metadata(config, [frame])
        metadata["solver_gap"] = repr(profile.solver_gap)
        return TableOutput(
            task="boundary-profile",
            columns=["theta", "exact_xi", "exact_theta", "asym_primary", "asym_alternative"],
            rows=profile.rows(),
            metadata=metadata,
            passed=profile.solver_gap <= config.tolerances.solver_agreement,
        )

    def run_field_grid(self, config: RunConfig) -> TableOutput:
        """
        |grad u| of the total field on a regular grid over the outer disk in the untranslated frame;
        points outside the outer disk are NaN.
        """
        eps, k = config.schedule()[0]
        frame = frame_for(config, eps)
        field = harmonic_extension(config.boundary_data.to_data(frame.r_e))
        sol = solve_modes(frame, k, field, config.boundary_data.kind, tol=config.tolerances.spectral)

        n = config.grid.grid_size
        x1, x2 = np.meshgrid(np.linspace(0.0, 2.0 * frame.r_e, n), np.linspace(-frame.r_e, frame.r_e, n))
        x = (x1 + 1j * x2).ravel()
        inside = np.abs(x - frame.r_e) < frame.r_e * (1.0 - 1e-12)
        inside &= np.abs(x + frame.x_0 - frame.alpha) > 1e-12
        inside &= np.abs(x + frame.x_0 + frame.alpha) > 1e-12
        norm = np.full(x.shape, math.nan)

        chunks = np.array_split(np.flatnonzero(inside), config.threads)
        running = [_grid_chunk(sol, x[chunk] + frame.x_0) for chunk in chunks if chunk.size]
        for chunk, thread in zip([chunk for chunk in chunks if chunk.size], running):
            norm[chunk] = thread.result()
        return TableOutput(
            task="field-grid",
            columns=["x1", "x2", "grad_norm"],
            rows=np.column_stack([x.real, x.imag, norm]),
            metadata=_metadata(config, [frame]),
        )


@in_separate_thread(daemon=True)
def _grid_chunk(sol, z: np.ndarray) -> np.ndarray:
    return np.abs(eval_mode_points(sol, z).gradient)


class SweepTasksMixin(BaseTaskMixin):
    def run_sweep(self, config: RunConfig) -> TableOutput:
        schedule = config.schedule()
        eps_list = [eps for eps, _ in schedule]
        k_list = [k for _, k in schedule]
        report = asymptotics.rate_sweep(
            config.geometry.r_i,
            config.geometry.r_e,
            eps_list,
            k_list,
            config.boundary_data.to_data(config.geometry.r_e),
            solution=config.solution,
            n_theta=config.grid.sweep_points,
            threads=config.threads,
            tol=config.tolerances.spectral,
        )
        names = list(report.norms)
        rows = [[eps, k] + [report.norms[name][j] for name in names] for j, (eps, k) in enumerate(schedule)]
        metadata = _metadata(config, [frame_for(config, eps) for eps in eps_list])
        metadata["row"] = report.row
        metadata["slopes"] = repr(report.slopes)
        metadata["slope_intervals"] = repr(report.slope_intervals)
        metadata["variation"] = repr(report.variation)
        for j, warning in enumerate(report.warnings):
            metadata[f"warning[{j}]"] = warning
        return TableOutput(task="sweep", columns=["eps", "k"] + names, rows=np.array(rows), metadata=metadata)

    def run_validate(self, config: RunConfig) -> TableOutput:
        report = validation.run_suite(config)
        metadata = {"config": config.json(sort_keys=True)}
        for j, check in enumerate(report.checks):
            metadata[f"check[{j}]"] = f"{check.name}; {check.context}"
        rows = [[j, check.tolerance, check.measured, float(check.passed)] for j, check in enumerate(report.checks)]
        return TableOutput(
            task="validate",
            columns=["check", "tolerance", "measured", "passed"],
            rows=np.array(rows),
            metadata=metadata,
            passed=report.passed,
        )
