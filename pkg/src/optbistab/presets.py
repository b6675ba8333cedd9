"""Named parameter presets reproducing the published figure settings.

Each preset resolves to one or more series; the CLI writes one file per
series. Spectrum presets pair the general weak-limit expression with the
relevant limit form so the overlap (or its breakdown) can be plotted; the
correlation presets pair the atomic and forward second-order correlations
at the experiment's rates.
"""

import numpy as np

from . import correlations, params as params_mod, spectra

PRESET_NAMES = ("fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b")

_FIG2_RATES_MHZ = {"kappa": 0.88, "gamma": 10.0, "N": 310}


def _doublet_grid(C, xi, points=4001):
    span = 2.0 * np.sqrt(xi * 2.0 * C)
    return np.linspace(-span, span, points)


def run_preset(name, seed=0):
    """Evaluate a preset; returns a list of (label, series) pairs."""
    if name == "fig1a":
        p = params_mod.SystemParams(C=5.0, xi=500.0, N=10**6)
        grid = np.linspace(-33.0, 33.0, 6601)
        return [
            ("weak_closed", spectra.spectrum_closed_form("weak-closed", p, y_grid=grid)),
            ("bad_cavity", spectra.spectrum_closed_form("bad-cavity", p, y_grid=grid)),
        ]
    if name == "fig1b":
        p = params_mod.SystemParams(C=5.0, xi=0.01, N=10**6)
        grid = np.linspace(-0.04, 0.04, 8001)
        return [
            ("weak_closed", spectra.spectrum_closed_form("weak-closed", p, y_grid=grid)),
            ("good_cavity", spectra.spectrum_closed_form("good-cavity", p, y_grid=grid)),
        ]
    if name == "fig1c":
        p = params_mod.SystemParams(C=200.0, xi=1.0, N=10**6)
        grid = _doublet_grid(p.C, p.xi)
        return [
            ("weak_closed", spectra.spectrum_closed_form("weak-closed", p, y_grid=grid)),
            ("strong_coupling",
             spectra.spectrum_closed_form("strong-coupling", p, y_grid=grid)),
        ]
    if name == "fig1d":
        X = 20.0
        grid = np.linspace(-60.0, 60.0, 6001)
        return [
            ("upper_branch",
             spectra.spectrum_closed_form("upper-branch", X=X, y_grid=grid)),
        ]
    if name in ("fig2a", "fig2b"):
        g_mhz = 1.06 if name == "fig2a" else 0.53
        p = params_mod.from_raw_rates(
            g_mhz, _FIG2_RATES_MHZ["kappa"], _FIG2_RATES_MHZ["gamma"],
            _FIG2_RATES_MHZ["N"], unit="MHz",
        )
        taus = np.linspace(0.0, 6.0, 1201)
        return [
            ("atomic", correlations.g2_closed_form("atomic-weak", p, tau_bar_grid=taus)),
            ("forward", correlations.g2_closed_form("forward-weak", p, tau_bar_grid=taus)),
        ]
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
