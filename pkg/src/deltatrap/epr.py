"""Overlap of the evolved pair with scaled EPR states |Y_r, P_c>.

<y_c, y_r | Y_r, P_c> = (2 pi)^(-1/2) exp(i P_c y_c) delta(y_r - Y_r), so the
delta is resolved by evaluating the amplitude at y_r = Y_r and only the y_c
integral remains.  Since the centre of mass is a ground-state Gaussian the
overlap factorizes as |psi_r(Y_r, t)|^2 exp(-P_c^2) / sqrt(pi).
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ValidationError
from .quadrature import symmetric_panels
from .wavepacket import CoordinateMap, eval_two_particle

YC_HALF_WIDTH = 12.0
YC_POINTS = 512


@dataclass(frozen=True)
class EprPoint:
    Y_r: float
    P_c: float

    def __post_init__(self):
        if not (math.isfinite(self.Y_r) and math.isfinite(self.P_c)):
            raise ValidationError("EprPoint", "components must be finite")


def epr_overlap(state, t, pt):
    """Closed form |psi_r(Y_r, t)|^2 exp(-P_c^2) / sqrt(pi)."""
    psi = complex(np.asarray(state.relative(np.array([pt.Y_r]), t))[0])
    return abs(psi) ** 2 * math.exp(-pt.P_c ** 2) / math.sqrt(math.pi)


def epr_overlap_direct(state, t, pt, half_width=YC_HALF_WIDTH, n_points=YC_POINTS):
    """Overlap by quadrature over y_c of the full two-particle amplitude."""
    yc, w = symmetric_panels(half_width, n_points)
    u1, u2 = CoordinateMap.inverse(yc, np.full_like(yc, pt.Y_r))
    amp = eval_two_particle(state, u1, u2, t)
    val = np.sum(w * np.exp(-1j * pt.P_c * yc) * amp) / math.sqrt(2.0 * math.pi)
    return float(abs(val) ** 2)


def overlap_lattice(state, t, y_values, p_values, method="closed"):
    """Overlap on the lattice y_values x p_values, shape (len(y), len(p))."""
    y_values = np.asarray(y_values, dtype=float)
    p_values = np.asarray(p_values, dtype=float)
    if method == "closed":
        prof = np.abs(state.relative(y_values, t)) ** 2
        return np.outer(prof, np.exp(-p_values ** 2)) / math.sqrt(math.pi)
    if method != "direct":
        raise ValidationError("method", "must be 'closed' or 'direct'")
    return np.array([[epr_overlap_direct(state, t, EprPoint(y, p)) for p in p_values]
                     for y in y_values])


def profile_maximum(state, t, y_values):
    """max over Y_r of the P_c = 0 overlap, and where it occurs."""
    prof = np.abs(state.relative(np.asarray(y_values, dtype=float), t)) ** 2 / math.sqrt(math.pi)
    i = int(np.argmax(prof))
    return float(prof[i]), float(y_values[i])
