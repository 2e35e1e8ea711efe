"""Independent reference values for the frozen constants in the Rust test suite.

Uses mpmath (50 digits) for scalar formulas and numpy for small dense
quantum-state computations. Nothing here imports or mirrors the Rust code.
Run: python3 reference_values.py
"""
import itertools
import numpy as np
from mpmath import mp, mpf, log, sqrt, findroot, cos, pi

mp.dps = 50


def h(p):
    p = mpf(p)
    if p == 0 or p == 1:
        return mpf(0)
    return -p * log(p, 2) - (1 - p) * log(1 - p, 2)


def casc(a, b):
    a, b = mpf(a), mpf(b)
    return a + b - 2 * a * b


def show(name, v):
    print(f"{name:48s} {mp.nstr(v, 17)}")


show("h(0.1)", h("0.1"))
show("h(0.2)", h("0.2"))
show("h(0.3)", h("0.3"))
show("h(0.26)", h("0.26"))
show("h(0.18)", h("0.18"))
show("h(0.32)", h("0.32"))
c2 = cos(pi / 8) ** 2
show("cos^2(pi/8)", c2)
show("H(cos^2(pi/8), sin^2(pi/8))", h(c2))
show("shannon(0.853553,0.146447)", -mpf("0.853553") * log(mpf("0.853553"), 2) - mpf("0.146447") * log(mpf("0.146447"), 2))
show("MI uniform BSC(0.1)", 1 - h("0.1"))
show("cmi uniform main .1 eve .2 = h(.26)-h(.1)", h(casc("0.1", "0.2")) - h("0.1"))
show("cs(0.1,0.2)", h("0.2") - h("0.1"))
show("cs_bar_lower(0.1,0.1,0.2)", max(h(casc("0.1", "0.2")), h(casc("0.1", "0.2"))) - h(casc("0.1", "0.1")))
show("cs_bar_lower(0.2,0.2,0)", h("0.2") - h(casc("0.2", "0.2")))
show("forward eve .05 delta .25", casc("0.05", "0.25"))

# Fano: H_b(p) + p log2 3 = log2 4 - 1
f = lambda p: h(p) + p * log(3, 2) - 1
show("fano(M=4, chi=1)", findroot(f, mpf("0.19")))
show("trace distance |0> vs |+>", sqrt(2))
show("helstrom two |0> vs |+>", mpf(1) / 2 + sqrt(2) / 4)
show("rate branch 1 example", log(3, 2) + 8)
show("tsirelson", sqrt(2) / 2)
show("win tsirelson", (sqrt(2) / 2 + 1) / 2)


# ---- dense quantum reference (numpy, float64) ----
def vn(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-14]
    return float(-(w * np.log2(w)).sum())


def chi(states, priors=None):
    n = len(states)
    priors = priors if priors is not None else [1.0 / n] * n
    avg = sum(p * s for p, s in zip(priors, states))
    return vn(avg) - sum(p * vn(s) for p, s in zip(priors, states))


ket0 = np.array([1.0, 0.0])
plus = np.array([1.0, 1.0]) / np.sqrt(2)
P0 = np.outer(ket0, ket0)
Pp = np.outer(plus, plus)
depol = lambda r, lam: (1 - lam) * r + lam * np.eye(2) / 2
print("chi {|0>,|+>}                                   ", repr(chi([P0, Pp])))
chiE = chi([depol(P0, 0.5), depol(Pp, 0.5)])
print("chi_E depol 0.5                                 ", repr(chiE))
print("secrecy rate {|0>,|+>} depol 0.5                ", repr(chi([P0, Pp]) - chiE))

# fine-grid oracle for optimum prior (symmetric bob, depolarizing eve)
best = max(
    ((chi([P0, Pp], [1 - t, t]) - chi([depol(P0, 0.5), depol(Pp, 0.5)], [1 - t, t]), t) for t in np.arange(0, 1 + 1e-12, 1e-5)),
)
print("optimum secrecy rate fine grid (value, p1)      ", repr(best))


# Polar transform by explicit dense construction with classical registers as
# full block matrices (no block-diagonal shortcut).
def minus(states):
    return [0.5 * sum(np.kron(states[u1 ^ u2], states[u2]) for u2 in (0, 1)) for u1 in (0, 1)]


def plus_(states):
    out = []
    for u2 in (0, 1):
        acc = 0
        for u1 in (0, 1):
            reg = np.zeros((2, 2)); reg[u1, u1] = 1
            acc = acc + 0.5 * np.kron(reg, np.kron(states[u1 ^ u2], states[u2]))
        out.append(acc)
    return out


th = np.pi / 4
psi = np.array([np.cos(th), np.sin(th)])
amp = [P0, np.outer(psi, psi)]
print("amplitude pi/4 chi(W)                           ", repr(chi(amp)))
print("amplitude pi/4 chi(W-)                          ", repr(chi(minus(amp))))
print("amplitude pi/4 chi(W+)                          ", repr(chi(plus_(amp))))
lvl2 = [chi(minus(minus(amp))), chi(plus_(minus(amp))), chi(minus(plus_(amp))), chi(plus_(plus_(amp)))]
print("amplitude pi/4 depth2 chis (--,-+,+-,++)        ", [repr(x) for x in lvl2])
lvl1 = [chi(minus(amp)), chi(plus_(amp))]
print("depth1 sample variance                          ", repr(np.var(lvl1, ddof=1)))
print("depth2 sample variance                          ", repr(np.var(lvl2, ddof=1)))
eve = [depol(s, 0.8) for s in amp]
print("eve (depol 0.8) chi(W)                          ", repr(chi(eve)))
print("eve depth2 chis                                 ", [repr(chi(f(g(eve)))) for g in (minus, plus_) for f in (minus, plus_)])


# ---- depth-3 polarization with block-diagonal classical registers ----
# A state is a list of unnormalised blocks; the classical register of W+ is
# kept as separate blocks.
def bminus(states):
    out = []
    for u1 in (0, 1):
        blocks = []
        for i in range(len(states[0])):
            for j in range(len(states[0])):
                blocks.append(0.5 * sum(np.kron(states[u1 ^ u2][i], states[u2][j]) for u2 in (0, 1)))
        out.append(blocks)
    return out


def bplus(states):
    out = []
    for u2 in (0, 1):
        blocks = []
        for u1 in (0, 1):
            for i in range(len(states[0])):
                for j in range(len(states[0])):
                    blocks.append(0.5 * np.kron(states[u1 ^ u2][i], states[u2][j]))
        out.append(blocks)
    return out


def bentropy(blocks):
    tot = 0.0
    for b in blocks:
        w = np.linalg.eigvalsh(b)
        w = w[w > 1e-14]
        tot -= float((w * np.log2(w)).sum())
    return tot


def bchi(states):
    avg = [0.5 * (a + b) for a, b in zip(states[0], states[1])]
    return bentropy(avg) - 0.5 * (bentropy(states[0]) + bentropy(states[1]))


def tree(states, depth):
    level = [states]
    for _ in range(depth):
        level = [f(s) for s in level for f in (bminus, bplus)]
    return [bchi(s) for s in level]


bob3 = tree([[P0], [np.outer(psi, psi)]], 3)
eve3 = tree([[s] for s in eve], 3)
print("bob depth3 chis", [repr(float(x)) for x in bob3])
print("eve depth3 chis", [repr(float(x)) for x in eve3])
print("bob depth3 sample variance", np.var(bob3, ddof=1), "mean", np.mean(bob3))
sel = [i for i in range(8) if bob3[i] >= 0.9 and eve3[i] <= 0.1]
print("secure set theta=0.1", sel, len(sel) / 8, "target", chi(amp) - chi(eve))


# ---- exact depth-3 check for pure inputs via Gram matrices ----
# Every block is a weighted sum of rank-one terms; its non-zero spectrum is
# that of the Gram matrix sqrt(w_k w_l) <v_k|v_l>, computed at 40 digits.
mp.dps = 40


def kronv(a, b):
    return [x * y for x in a for y in b]


def gminus(states):
    out = []
    for u1 in (0, 1):
        blocks = []
        for i in range(len(states[0])):
            for j in range(len(states[0])):
                blocks.append([(w1 * w2 / 2, kronv(v1, v2)) for u2 in (0, 1)
                               for (w1, v1) in states[u1 ^ u2][i] for (w2, v2) in states[u2][j]])
        out.append(blocks)
    return out


def gplus(states):
    out = []
    for u2 in (0, 1):
        blocks = []
        for u1 in (0, 1):
            for i in range(len(states[0])):
                for j in range(len(states[0])):
                    blocks.append([(w1 * w2 / 2, kronv(v1, v2))
                                   for (w1, v1) in states[u1 ^ u2][i] for (w2, v2) in states[u2][j]])
        out.append(blocks)
    return out


def gentropy(blocks):
    tot = mpf(0)
    for terms in blocks:
        r = len(terms)
        g = mp.matrix(r, r)
        for k in range(r):
            for l in range(r):
                g[k, l] = sqrt(terms[k][0] * terms[l][0]) * mp.fsum(a * b for a, b in zip(terms[k][1], terms[l][1]))
        for lam in mp.eigsy(g, eigvals_only=True):
            if lam > mpf(10) ** -30:
                tot -= lam * log(lam, 2)
    return tot


def gchi(states):
    avg = [[(w / 2, v) for (w, v) in a + b] for a, b in zip(states[0], states[1])]
    return gentropy(avg) - (gentropy(states[0]) + gentropy(states[1])) / 2


gpsi = [cos(pi / 4), mp.sin(pi / 4)]
gbob = [[[(mpf(1), [mpf(1), mpf(0)])]], [[(mpf(1), gpsi)]]]
for path in ("++-", "+++", "+-+", "-++"):
    s = gbob
    for c in path:
        s = gminus(s) if c == "-" else gplus(s)
    print("bob exact chi", path, mp.nstr(gchi(s), 20))


# Wilson score intervals, alpha = 0.05.
from statsmodels.stats.proportion import proportion_confint

for c, n in [(0, 10), (3, 10), (81, 263), (7040, 10000), (1, 100000), (99999, 100000), (500, 1000), (17, 65536)]:
    lo, hi = proportion_confint(c, n, alpha=0.05, method="wilson")
    print("wilson", c, n, repr(lo), repr(hi))
