"""Instance generation, file formats, property suites and the command line."""

from .generate import InstanceSpec, default_start, generate, parse_instance_spec
from .io import ProblemFormatError, load_problem, load_run, save_problem, save_run

__all__ = [
    "InstanceSpec", "ProblemFormatError", "default_start", "generate",
    "load_problem", "load_run", "parse_instance_spec", "save_problem", "save_run",
]
