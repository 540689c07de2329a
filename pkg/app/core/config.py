"""
Configuration and environment settings for the application.
Runtime knobs come from the environment (.env supported); everything else
here is static structured data that is evaluated elsewhere.
"""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

# Load .env: first from current working directory, then from project root.
load_dotenv()
_project_root = Path(__file__).resolve().parent.parent.parent
_env_path = _project_root / ".env"
if _env_path.exists():
    load_dotenv(_env_path)

logger = logging.getLogger(__name__)


def _env_int(name: str, default: int | None) -> int | None:
    """Read a positive integer from the environment. Blank or 'auto' -> default."""
    raw = (os.environ.get(name) or "").strip().lower()
    if not raw or raw == "auto":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("config | ignoring %s=%r | not an integer", name, raw)
        return default
    if value <= 0:
        logger.warning("config | ignoring %s=%r | must be positive", name, raw)
        return default
    return value


def _env_choice(name: str, choices: tuple[str, ...], default: str) -> str:
    raw = (os.environ.get(name) or "").strip().lower()
    if not raw:
        return default
    if raw not in choices:
        logger.warning("config | ignoring %s=%r | expected one of %s", name, raw, choices)
        return default
    return raw


# ---------------------------------------------------------------------------
# Runtime settings.
# ---------------------------------------------------------------------------

STRATA_THREADS: int = _env_int("STRATA_THREADS", None) or (os.cpu_count() or 1)

STRATA_BRUTE_STATE_CAP: int = _env_int("STRATA_BRUTE_STATE_CAP", 2**24)

CONVENTIONS = ("koszul", "naive")
STRATA_DEFAULT_CONVENTION: str = _env_choice("STRATA_DEFAULT_CONVENTION", CONVENTIONS, "koszul")

STRATA_LOG_LEVEL: str = (os.environ.get("STRATA_LOG_LEVEL") or "INFO").strip().upper()

# ---------------------------------------------------------------------------
# Numeric constants shared by the calculators.
# ---------------------------------------------------------------------------

# Integer-valuedness of counting polynomials is checked by sampling these q.
INTEGER_SAMPLE_POINTS = (-2, -1, 0, 1, 2, 3, 4, 5)

# Hyde detector: coefficient windows must agree for this many consecutive n.
HYDE_AGREEMENT_RUN = 3

# Brute-force oracle works over these prime fields only.
BRUTE_PRIMES = (2, 3, 5)

# Stable series are known as inputs for parts up to this size.
STABLE_SERIES_MAX_PART = 3

# E1 windows and Betti windows are available up to this degree d.
WINDOW_MAX_DEGREE_D = 4

# ---------------------------------------------------------------------------
# Rational closed forms t^shift / prod(1 - t^k). STABLE_INPUT_FORMS is the
# only registry input of the graded engine; PRINTED_CLOSED_FORMS are kept
# verbatim for comparison reports and are never fed back into a pipeline.
# ---------------------------------------------------------------------------

STABLE_INPUT_FORMS = {
    1: {"shift": 2, "denominators": (2,)},
}

PRINTED_CLOSED_FORMS = {
    1: {"shift": 2, "denominators": (2,), "printed": "P_1(t) = t^2/(1-t^2)"},
    2: {"shift": 5, "denominators": (2, 4), "printed": "P_2(t) = t^5/((1-t^2)(1-t^4))"},
    3: {"shift": 10, "denominators": (2, 6), "printed": "P_3(t) = t^10/((1-t^2)(1-t^6))"},
}

# ---------------------------------------------------------------------------
# Differential rules for the stable spectral sequence of Red_d. Rules are
# declarative: (page, source column p, source total-degree range, kind).
# A range upper bound of None means unbounded.
# ---------------------------------------------------------------------------

KNOWN_INJECTIVE = "known_injective"
KNOWN_ZERO = "known_zero"

SHIPPED_DIFFERENTIAL_RULES = {
    2: [],
    3: [
        {
            "page": 1,
            "p": 0,
            "degrees": (0, None),
            "kind": KNOWN_INJECTIVE,
            "provenance": (
                "d=3: delta_i from H^i_c(Sym^3 Irr_1) to H^{i+1}_c(Irr_2 x Irr_1) "
                "is injective for every i (transfer argument)"
            ),
        },
    ],
    4: [
        {
            "page": 1,
            "p": 0,
            "degrees": (8, 10),
            "kind": KNOWN_INJECTIVE,
            "provenance": (
                "d=4: the two differentials from column p=0 to column p=1 in the "
                "total-degree <= 10 region are injective, by the same argument as d=3"
            ),
        },
        {
            "page": 1,
            "p": 1,
            "degrees": (9, 9),
            "kind": KNOWN_ZERO,
            "provenance": "d=4: the differential E_1^{1,8} -> E_1^{2,8} is zero",
        },
    ],
}

logger.info(
    "config | STRATA_THREADS=%s | STRATA_BRUTE_STATE_CAP=%s | STRATA_DEFAULT_CONVENTION=%s",
    STRATA_THREADS,
    STRATA_BRUTE_STATE_CAP,
    STRATA_DEFAULT_CONVENTION,
)
