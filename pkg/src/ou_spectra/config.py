"""Tolerance configuration.

Every residual or rank decision in the package goes through a
:class:`Tolerances` instance so that a single object documents what "equal",
"symmetric", "stable" and "low rank" mean numerically.  Three named profiles
scale the default residual tolerances down (``strict``) or up (``loose``);
the profile can be selected with the ``OU_SPECTRA_TOL_PROFILE`` environment
variable and individual fields can be overridden per model file.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

_ENV_VAR = "OU_SPECTRA_TOL_PROFILE"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used throughout the package.

    Attributes
    ----------
    sym_tol : float
        Maximum allowed entrywise asymmetry ``max|M - M.T|`` for matrices
        that must be symmetric.
    psd_tol : float
        How far below zero an eigenvalue of a nominally PSD matrix may sit,
        relative to the largest eigenvalue.
    lyap_tol : float
        Residual tolerance for the steady-state covariance equation,
        scaled by ``1 + norm(Q)``.
    rank_tol : float
        Relative eigenvalue (or singular value) threshold used for all
        numerical rank decisions.
    inv_tol : float
        Tolerance for subspace-invariance residuals, scaled by
        ``1 + norm(argument)``.
    stab_tol : float
        Margin by which the spectral abscissa must be negative before the
        drift counts as stable.
    cluster_radius : float
        Radius used when clustering near-identical spectrum points.
    size_cap : int
        Largest tensor-power side length the package will materialize.
    """

    sym_tol: float = 1e-10
    psd_tol: float = 1e-10
    lyap_tol: float = 1e-10
    rank_tol: float = 1e-10
    inv_tol: float = 1e-8
    stab_tol: float = 1e-8
    cluster_radius: float = 1e-7
    size_cap: int = 4096

    def scaled(self, factor):
        """Return a copy with every float tolerance multiplied by `factor`.

        The size cap is left untouched; it is a memory guard, not a
        precision knob.
        """
        updates = {
            f.name: getattr(self, f.name) * factor
            for f in dataclasses.fields(self)
            if f.type == "float"
        }
        return dataclasses.replace(self, **updates)

    def with_overrides(self, overrides):
        """Return a copy with the given field values replaced.

        Parameters
        ----------
        overrides : dict
            Mapping from field name to new value.  Unknown keys raise
            ``ValueError`` so that typos in model files do not silently
            leave a default in place.
        """
        valid = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - valid
        if unknown:
            raise ValueError(
                "unknown tolerance field(s): %s" % ", ".join(sorted(unknown)))
        return dataclasses.replace(self, **overrides)


DEFAULT = Tolerances()

#: Named profiles: ``strict`` tightens every tolerance 100x, ``loose``
#: relaxes 100x.  ``default`` is the documented baseline.
PROFILES = {
    "strict": DEFAULT.scaled(1e-2),
    "default": DEFAULT,
    "loose": DEFAULT.scaled(1e2),
}


def from_profile(name):
    """Look up a named tolerance profile.

    Raises ``ValueError`` for unknown names, listing the valid ones.
    """
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(
            "unknown tolerance profile %r (expected one of %s)"
            % (name, ", ".join(sorted(PROFILES)))) from None


def from_env(default="default"):
    """Resolve tolerances from the ``OU_SPECTRA_TOL_PROFILE`` variable."""
    return from_profile(os.environ.get(_ENV_VAR, default))
