"""Reference values for the unit tests, evaluated at 50 significant digits.

Straight transcription of the textbook formulas with mpmath: no log-sum-exp
rewriting, no branch splitting. The C++ implementation uses stable rewrites,
so agreement between the two is a meaningful check.

    python3 tests/oracles/derive_values.py
"""
from mpmath import mp, mpf, exp, log

mp.dps = 50

N_A = mpf("6.02214076e23")
MU_B = mpf("9.2740100783e-21")
K_B = mpf("1.380649e-16")
C = N_A * MU_B**2 / K_B


def F(J, T):
    return 1 / (3 + exp(mpf(J) / T))


def S(J, T):
    f = F(J, T)
    p4 = 1 - 3 * f
    return -3 * f * log(f) - p4 * log(p4)


def S_closed_form(J, T):
    f = F(J, T)
    return -f * (exp(mpf(J) / T) * log(1 - 3 * f) + 3 * log(f))


def U(J, T):
    return 3 * mpf(J) * (F(J, T) - mpf(1) / 4)


def ledger(JA, JB, Th, Tc):
    qab = Th * (S(JB, Th) - S(JA, Th))
    qbc = U(JB, Tc) - U(JB, Th)
    qcd = Tc * (S(JA, Tc) - S(JB, Tc))
    qda = U(JA, Th) - U(JA, Tc)
    W = Th * log(exp((mpf(JA) - JB) / (4 * Th)) * F(JA, Th) / F(JB, Th)) + Tc * log(
        exp((mpf(JB) - JA) / (4 * Tc)) * F(JB, Tc) / F(JA, Tc))
    return qab, qbc, qcd, qda, W


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


show("C", C)
show("chi(J=0,T=1,g=2)", 2 * C * 4 * F(0, 1) / 1)
show("F(-32,20)", F(-32, 20))
show("F(-42,20)", F(-42, 20))
show("p4(-42,20)", 1 - 3 * F(-42, 20))
show("S(-32,40)", S(-32, 40))
show("S_closed_form(-32,40)", S_closed_form(-32, 40))
show("U(-32,20)", U(-32, 20))
qab, qbc, qcd, qda, W = ledger(-42, -32, 40, 20)
for n, v in zip(["q_ab", "q_bc", "q_cd", "q_da", "W"], [qab, qbc, qcd, qda, W]):
    show(n + "(-42,-32,40,20)", v)
show("sum q", qab + qbc + qcd + qda)
show("eta", W / (qab + qda))
qab, qbc, qcd, qda, W = ledger(-32, -42, 40, 20)
for n, v in zip(["q_ab", "q_bc", "q_cd", "q_da", "W"], [qab, qbc, qcd, qda, W]):
    show(n + "(-32,-42,40,20)", v)

# Paramagnetic-limit values: ln 4 - S and ln Z - ln 4 at small and large x.
for j, t in [(1e-3, 100), (-0.05, 100), (0.15, 100), (-150, 100), (300, 100), (-32, 20)]:
    x = mpf(j) / t
    show(f"ln4-S({j},{t})", log(4) - S(j, t))
    show(f"lnZ-ln4({j},{t})", log((3 * exp(-x / 4) + exp(3 * x / 4)) / 4))

# A cycle whose strokes are tiny next to T ln 4.
qab, qbc, qcd, qda, W = ledger(-0.3, 0.2, 3000, 1000)
for n, v in zip(["q_ab", "q_bc", "q_cd", "q_da", "W"], [qab, qbc, qcd, qda, W]):
    show(n + "(-0.3,0.2,3000,1000)", v)
