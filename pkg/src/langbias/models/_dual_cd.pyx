# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled epoch of dual coordinate descent for the L1-loss (hinge) linear SVM."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def dual_cd_epoch(const cnp.int64_t[::1] indptr,
                  const cnp.int32_t[::1] indices,
                  const double[::1] data,
                  const double[::1] y,
                  double[::1] alpha,
                  double[::1] w,
                  const double[::1] qii,
                  const cnp.int64_t[::1] order,
                  double C,
                  double bias_scale):
    """Visit every example once in ``order``; update ``alpha`` and ``w`` in place.

    ``w`` has one trailing slot for the bias weight of the constant feature
    ``bias_scale``. Returns the largest absolute projected gradient seen.
    """
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t nf = w.shape[0] - 1
    cdef Py_ssize_t t, i, k
    cdef double g, pg, a_old, a_new, d, max_pg = 0.0
    for t in range(n):
        i = order[t]
        g = w[nf] * bias_scale
        for k in range(indptr[i], indptr[i + 1]):
            g += w[indices[k]] * data[k]
        g = y[i] * g - 1.0

        a_old = alpha[i]
        if a_old == 0.0:
            pg = g if g < 0.0 else 0.0
        elif a_old == C:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g
        if pg < 0.0:
            if -pg > max_pg:
                max_pg = -pg
        elif pg > max_pg:
            max_pg = pg

        if pg != 0.0 and qii[i] > 0.0:
            a_new = a_old - g / qii[i]
            if a_new < 0.0:
                a_new = 0.0
            elif a_new > C:
                a_new = C
            alpha[i] = a_new
            d = (a_new - a_old) * y[i]
            if d != 0.0:
                for k in range(indptr[i], indptr[i + 1]):
                    w[indices[k]] += d * data[k]
                w[nf] += d * bias_scale
    return max_pg
