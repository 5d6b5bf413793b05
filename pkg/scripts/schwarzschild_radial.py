"""Outgoing radial null rays in Schwarzschild: RK4 error against t - r - ln(r - 1).

Prints the invariant drift for a ladder of step sizes and the ratio between
successive halvings (about 16 for a fourth-order method until round-off wins).
"""
import argparse
from dataclasses import dataclass

import numpy as np

from nullbundle import bundle as bd
from nullbundle import distribution as dist


@dataclass(frozen=True)
class Config:
    r0: float = 2.0
    t_end: float = 5.0
    steps: tuple = (0.4, 0.2, 0.1, 0.05, 0.025, 1e-3)
    ingoing: bool = False


def drift(ode, p0, t_end, step):
    curve = dist.integrate_explicit(ode, p0, t_end, step, tol_drift=1.0)
    if ode.k.spatial(curve.x[:1])[0, 0] < 0:
        # ingoing rays conserve t + r + ln(r - 1)
        inv = curve.x[:, 0] + curve.x[:, 1] + np.log(curve.x[:, 1] - 1)
    else:
        inv = dist.radial_invariant(curve.x)
    return curve, float(np.max(np.abs(inv - inv[0])))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--r0", type=float, default=Config.r0)
    p.add_argument("--t-end", type=float, default=Config.t_end)
    p.add_argument("--ingoing", action="store_true")
    a = p.parse_args(argv)
    cfg = Config(a.r0, a.t_end, ingoing=a.ingoing)

    st = bd.schwarzschild()
    ode = dist.ExplicitNullODE(dist.schwarzschild_radial_field(st, outgoing=not cfg.ingoing))
    p0 = st.event([0.0, cfg.r0, np.pi / 2, 0.0])
    prev = None
    print(f"{'step':>8} {'r_end':>12} {'drift':>10} {'ratio':>7}")
    for h in cfg.steps:
        curve, err = drift(ode, p0, cfg.t_end, h)
        ratio = "" if prev is None or err == 0 else f"{prev / err:7.2f}"
        print(f"{h:8.3g} {curve.x[-1, 1]:12.8f} {err:10.2e} {ratio:>7}")
        prev = err


if __name__ == "__main__":
    main()
