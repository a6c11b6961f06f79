"""Pure-Python twin of ``_dual_cd.dual_cd_epoch``; same arguments, same update order."""


def dual_cd_epoch(indptr, indices, data, y, alpha, w, qii, order, C, bias_scale):
    nf = len(w) - 1
    # plain lists are much faster than numpy scalars in this loop
    ptr = indptr.tolist()
    col = indices.tolist()
    val = data.tolist()
    ys = y.tolist()
    q = qii.tolist()
    a = alpha.tolist()
    wl = w.tolist()
    max_pg = 0.0
    for i in order.tolist():
        lo, hi = ptr[i], ptr[i + 1]
        g = wl[nf] * bias_scale
        for k in range(lo, hi):
            g += wl[col[k]] * val[k]
        g = ys[i] * g - 1.0

        a_old = a[i]
        if a_old == 0.0:
            pg = g if g < 0.0 else 0.0
        elif a_old == C:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g
        if abs(pg) > max_pg:
            max_pg = abs(pg)

        if pg != 0.0 and q[i] > 0.0:
            a_new = min(max(a_old - g / q[i], 0.0), C)
            a[i] = a_new
            d = (a_new - a_old) * ys[i]
            if d != 0.0:
                for k in range(lo, hi):
                    wl[col[k]] += d * val[k]
                wl[nf] += d * bias_scale
    alpha[:] = a
    w[:] = wl
    return max_pg
