"""Straight-from-definition reference implementations.

Deliberately naive: plain Python loops, math.exp and math.dist, sets built
from the quantified definitions. Nothing here imports the library, so a bug
in the library cannot leak into its oracle.
"""

import math
from fractions import Fraction


def knn_lists(points, k):
    out = []
    for p, x in enumerate(points):
        cand = sorted((math.dist(x, y), q) for q, y in enumerate(points) if q != p)
        out.append([q for _, q in cand[:k]])
    return out


def nn_rank(knn, x, r):
    """NN_r(x), 1-based."""
    return knn[x][r - 1]


def reverse_set(knn, p, k):
    return {x for x in range(len(knn)) if x != p and any(nn_rank(knn, x, r) == p for r in range(1, k + 1))}


def shared_set(knn, p, k):
    """x with NN_r(x) == NN_s(p) for some r, s <= k."""
    out = set()
    for x in range(len(knn)):
        if x == p:
            continue
        for r in range(1, k + 1):
            for s in range(1, k + 1):
                if nn_rank(knn, x, r) == nn_rank(knn, p, s):
                    out.add(x)
    return out


def extended_set(knn, p, k):
    return set(knn[p]) | reverse_set(knn, p, k) | shared_set(knn, p, k)


def kernel(x, y, h, d, convention="paper"):
    sq = sum((a - b) ** 2 for a, b in zip(x, y))
    div = 2 * h if convention == "paper" else 2 * h * h
    return (2 * math.pi) ** (-d / 2) * math.exp(-sq / div)


def rdos(points, k, h, convention="paper"):
    d = len(points[0])
    knn = knn_lists(points, k)
    sets = [extended_set(knn, p, k) for p in range(len(points))]
    dens = []
    for p, s in enumerate(sets):
        total = sum(kernel(points[x], points[p], h, d, convention) / h**d for x in s | {p})
        dens.append(total / (len(s) + 1))
    scores = [sum(dens[i] for i in s) / (len(s) * dens[p]) for p, s in enumerate(sets)]
    return scores, dens, sets


def mann_whitney_auc(scores, labels):
    """P(score_pos > score_neg) + 0.5 P(tie), by counting all pairs exactly."""
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    wins = Fraction(0)
    for a in pos:
        for b in neg:
            if a > b:
                wins += 1
            elif a == b:
                wins += Fraction(1, 2)
    return wins / (len(pos) * len(neg))


def lof(points, k):
    knn = knn_lists(points, k)
    kdist = [math.dist(points[p], points[knn[p][-1]]) for p in range(len(points))]
    lrd = []
    for p in range(len(points)):
        reach = [max(kdist[o], math.dist(points[p], points[o])) for o in knn[p]]
        lrd.append(k / sum(reach))
    return [sum(lrd[o] for o in knn[p]) / k / lrd[p] for p in range(len(points))]


def inflo(points, k):
    knn = knn_lists(points, k)
    den = [1 / math.dist(points[p], points[knn[p][-1]]) for p in range(len(points))]
    out = []
    for p in range(len(points)):
        space = set(knn[p]) | reverse_set(knn, p, k)
        out.append(sum(den[o] for o in space) / len(space) / den[p])
    return out
