"""Pipeline orchestration: config, traces, runs, evaluation, HTTP service."""

from .config import PipelineConfig, RemoteEndpoints, load_config
from .evaluate import GsrReport, evaluate_gsr
from .run import resolve_backends, run_pipeline
from .trace import (
    RunTrace,
    TraceWriter,
    append_event,
    canonical_trace_bytes,
    list_runs,
    new_run_id,
    read_trace,
)

__all__ = [
    "GsrReport",
    "PipelineConfig",
    "RemoteEndpoints",
    "RunTrace",
    "TraceWriter",
    "append_event",
    "canonical_trace_bytes",
    "evaluate_gsr",
    "list_runs",
    "load_config",
    "new_run_id",
    "read_trace",
    "resolve_backends",
    "run_pipeline",
]
