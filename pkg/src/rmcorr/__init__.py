"""First-order frame correspondents for relevance, bunched-implication and
relation-algebra logics over ternary-relation frames, verified by brute-force
model checking on all small finite frames."""

from .calculus import Inequality, NotApplicable, QuasiInequality
from .frames import RMFrame, check_frame, correspondence_check, enumerate_frames
from .pipeline import CorrespondenceResult, correspondent
from .render import OutputFormat, render
from .syntax import ParseError, SyntaxMode, parse, to_text

__version__ = "0.1.0"

__all__ = [
    "Inequality",
    "QuasiInequality",
    "NotApplicable",
    "RMFrame",
    "check_frame",
    "enumerate_frames",
    "correspondence_check",
    "CorrespondenceResult",
    "correspondent",
    "OutputFormat",
    "render",
    "ParseError",
    "SyntaxMode",
    "parse",
    "to_text",
    "__version__",
]
