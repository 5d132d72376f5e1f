"""Gradient density estimation from the power spectrum of exp(iS/tau).

The heavy lifting lives in the compiled extension; this package re-exports
its surface. Typical use:

    import gradwave as gw
    field = gw.sample_catalog("quadratic1d", [4096])
    tau = gw.choose_tau(field, gw.grad_bound("quadratic1d"))
    density = gw.power_spectrum_density(field, tau)
    density.mass_in_ball([0.3], 0.05)
"""

from ._gradwave import *  # noqa: F401,F403
from ._gradwave import __doc__ as _ext_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _ext_doc if _ext_doc else __doc__
