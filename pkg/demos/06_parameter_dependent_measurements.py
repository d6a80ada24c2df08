"""Two measurement models whose apparatus itself carries the parameter.

When the parameter enters the measurement (not only the state), the usual
quantum Cramer-Rao ceiling no longer binds.  A two-level atom reading out a
bosonic mode beats the best regular measurement in part of the
frequency-time plane -- dramatically so when the field starts in a Fock
state, where the QFI vanishes but the atomic read-out still learns.  A
mechanical oscillator probing a uniform field shows the same effect in
closed form.
"""

import math

from qmet import classical_fisher, jc_readout_model, reference

print("=== Bosonic-mode frequency through an atomic read-out ===")
kappa, t = 0.5, 3.0
alpha1_sq = 0.96
alpha0, alpha1 = math.sqrt(1 - alpha1_sq), math.sqrt(alpha1_sq)
print(f"{'omega':>6} {'F_Q':>9} {'F_C(sim)':>10} {'F_C(ref)':>10} {'gamma':>8}  beats regular?")
for omega in (0.3, 0.6, 1.0, 1.5):
    fq = reference("jc_qfi")(t=t, alpha1_sq=alpha1_sq)
    fc_ref = reference("jc_fc")(omega=omega, kappa=kappa, t=t, alpha1_sq=alpha1_sq)
    pm = jc_readout_model(kappa, t, alpha0, alpha1, n_max=8)
    fc_sim = classical_fisher(pm, omega).value
    gamma = fc_sim / fq
    print(f"{omega:6.2f} {fq:9.4f} {fc_sim:10.4f} {fc_ref:10.4f} {gamma:8.4f}  {gamma > 1}")

print()
print("=== Fock-state preparation: the regular ceiling is zero ===")
pm = jc_readout_model(kappa, t, 0.0, 1.0, n_max=8)
omega = 0.8
fc = classical_fisher(pm, omega).value
print(f"F_Q = 0 exactly, yet F_C = {fc:.6f} "
      f"(closed form (Omega t/omega)^2 = {(kappa * math.sqrt(omega) * t / omega) ** 2:.6f})")

print()
print("=== Where does the atomic read-out win? ===")
thr = reference("jc_enhancement_threshold")
print("largest |alpha_0|^2 still giving an advantage, over (omega, t):")
print(f"{'':>6}" + "".join(f"t={tv:5.1f} " for tv in (1.0, 2.0, 4.0, 6.0)))
for omega in (0.3, 0.8, 1.5):
    row = [thr(omega=omega, kappa=kappa, t=tv) for tv in (1.0, 2.0, 4.0, 6.0)]
    print(f"w={omega:4.1f} " + "".join(f"{x:7.3f}" for x in row))

print()
print("=== Oscillator in a uniform field (closed forms) ===")
mass, omega = 1.0, 1.0
print(f"{'t/T':>6} {'gamma = F_C/F_Q':>16}  energy measurement wins?")
for frac in (0.05, 0.10, 0.15, 0.20, 0.25, 0.5):
    tt = frac * 2 * math.pi / omega
    gamma = reference("oscillator_gamma")(omega=omega, t=tt)
    print(f"{frac:6.3f} {gamma:16.4f}  {gamma > 1}")
print("the advantage region is exactly |sin(wt/2)| < 1/2, i.e. t/T < 1/6 mod 1")
