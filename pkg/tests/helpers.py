"""Independent brute-force oracles used to freeze expected values.

These deliberately avoid the production code paths: certification goes
through raw behavior filtering, covers through exhaustive subset search,
and the Shtarkov value through the full 2^T label sum.
"""

import itertools
import math
from fractions import Fraction


def brute_certifies(cls, prefix, labels, x_t):
    """Certification via behavior filtering only (no consistency states)."""
    behaviors = cls.behaviors(list(prefix) + [x_t])
    target = tuple(labels)
    options = {b.labels[-1] for b in behaviors if b.labels[:-1] == target}
    if not options:
        raise ValueError("labels not realizable")
    return len(options) == 1


def brute_non_certified(cls, sample, h):
    labels = [cls.evaluate(h, x) for x in sample]
    count = 0
    for i in range(len(sample)):
        rest = [x for j, x in enumerate(sample) if j != i]
        rest_labels = [y for j, y in enumerate(labels) if j != i]
        if not brute_certifies(cls, rest, rest_labels, sample[i]):
            count += 1
    return count


def exhaustive_loo_error_rate(cls, sample, behavior):
    """Mean last-step 1-inclusion error over every order of the sample."""
    from seqcover.predictors import one_inclusion_predict

    n = len(sample)
    errors = 0
    total = 0
    for order in itertools.permutations(range(n)):
        feats = [sample[i] for i in order]
        labs = [behavior.labels[i] for i in order]
        pred = one_inclusion_predict(cls, feats, labs[:-1])
        errors += pred != labs[-1]
        total += 1
    return errors / total


def explicit_shtarkov(cls, sample):
    """log sum over all 2^T label vectors of the max likelihood product."""
    behaviors = [b.labels for b in cls.behaviors(list(sample))]
    total = 0.0
    for y in itertools.product((0, 1), repeat=len(sample)):
        best = 0.0
        for b in behaviors:
            prod = 1.0
            for p, yt in zip(b, y):
                prod *= p if yt == 1 else 1 - p
            best = max(best, prod)
        total += best
    return math.log(total)


def exact_min_cover_size(vectors, alpha):
    """Smallest alpha-cover of the vectors by exhaustive subset search.

    Cover sets are bitmasks and dominated candidates are dropped first, so
    this stays exact while handling a few dozen vectors.
    """
    alpha = Fraction(alpha)
    n = len(vectors)

    def covers(i, j):
        return all(abs(Fraction(a) - Fraction(b)) <= alpha for a, b in zip(vectors[i], vectors[j]))

    masks = []
    for i in range(n):
        m = 0
        for j in range(n):
            if covers(i, j):
                m |= 1 << j
        masks.append(m)
    # drop candidates whose coverage is contained in another's
    keep = [
        m
        for i, m in enumerate(masks)
        if not any(m != o and m | o == o for o in masks)
    ]
    keep = sorted(set(keep), reverse=True)
    full = (1 << n) - 1
    for k in range(1, len(keep) + 1):
        for combo in itertools.combinations(keep, k):
            hit = 0
            for m in combo:
                hit |= m
            if hit == full:
                return k
    return n


def brute_fat_shattered(values, alpha, d, witness_candidates):
    """Subset-mask fat-shattering check for nondecreasing value assignments."""
    alpha = Fraction(alpha)

    def feasible(mask, witnesses):
        prev = None
        for t, s_t in enumerate(witnesses):
            if mask[t]:
                cands = [v for v in values if v >= s_t + alpha]
            else:
                cands = [v for v in values if v <= s_t - alpha]
            if prev is not None:
                cands = [v for v in cands if v >= prev]
            if not cands:
                return False
            prev = min(cands)
        return True

    for witnesses in itertools.combinations(witness_candidates, d):
        if all(feasible(mask, witnesses) for mask in itertools.product((0, 1), repeat=d)):
            return True
    return False
