"""Certifying the asymptotic lemmas behind the stability estimates.

Sweeps the spectral sums I((tau+i)^2) and the sharp integrals I_sharp(tau)
across their three exponent regimes, compares the b=0, nu=2 case with its
arctangent closed form, and probes where the regime bounds are sharp.
"""

import numpy as np

from borglev import LemmaQuery, check_lemma1, check_lemma2, check_lemma3
from borglev.lemmas import i_sharp, i_sharp_closed_b0_nu2, probe_sharpness

taus = np.geomspace(8.0, 256.0, 9)

print("series sums I(lambda) = sum j^mu / |lambda - lambda_j|^nu:")
for mu, nu in [(0.0, 2.0), (-0.5, 1.0), (-2.0, 1.0)]:
    rep = check_lemma1(LemmaQuery(mu=mu, nu=nu, K_cut=100_000), taus)
    print(f"  mu={mu:5.1f} nu={nu:3.1f} [{rep.regime:8s}] fitted "
          f"{rep.fitted_slope:6.2f} vs predicted {rep.predicted_slope:6.2f}"
          f"  pass={rep.passes}")

print("\nsharp integrals I_sharp(tau):")
for b, nu in [(0.0, 2.0), (-0.5, 1.0), (-2.0, 1.0)]:
    rep = check_lemma2(b, nu, taus)
    print(f"  b={b:5.1f} nu={nu:3.1f} [{rep.regime:8s}] fitted "
          f"{rep.fitted_slope:6.2f} vs predicted {rep.predicted_slope:6.2f}"
          f"  pass={rep.passes}  (substitution residual "
          f"{rep.extras['substitution_residual']:.1e})")

err = abs(i_sharp(0.0, 2.0, 64.0) - i_sharp_closed_b0_nu2(64.0))
print(f"\nb=0, nu=2 closed form check at tau=64: |quad - arctan| = {err:.2e}")

print("\nleft half-plane decay I(lambda), Re(lambda) < 0:")
rep = check_lemma3(LemmaQuery(mu=-2.0, nu=1.0, K_cut=100_000),
                   [-2.0, -8.0, -32.0, -128.0])
print(f"  mu=-2 nu=1: fitted {rep.fitted_slope:.2f} vs sharp "
      f"{rep.predicted_slope:.2f} (displayed variant "
      f"{rep.extras['displayed_exponent']:.2f})  pass={rep.passes}")

print("\nsharpness probe between the b>=0 and -1<=b<0 candidates:")
for row in probe_sharpness([(-0.25, 1.0)], np.geomspace(8.0, 256.0, 9)):
    print(f"  b={row['b']} nu={row['nu']}: fit {row['slope_fit']:.3f} "
          f"between candidates {row['slope_l2a']:.2f} and "
          f"{row['slope_l2b']:.2f}; log-factor coefficient "
          f"{row['log_coefficient']:.2f}")
