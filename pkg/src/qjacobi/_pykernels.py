"""Pure-Python fallback for the sparse-polynomial hot loops.

Terms are ``dict[int, rational]`` keyed by packed exponent vectors; see
:mod:`qjacobi.kernels` for the layout.
"""

SHIFT = 10
MASK = (1 << SHIFT) - 1
NGENS = 5
CBIAS = 512 << (SHIFT * NGENS)
UNITS = tuple(1 << (SHIFT * i) for i in range(NGENS))


def mul(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = {}
    get = out.get
    fitems = list(f.items())
    for k2, b in g.items():
        off = k2 - CBIAS
        for k1, a in fitems:
            k = k1 + off
            out[k] = get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


def derive(f, images):
    """Leibniz extension of a derivation given by the images of the generators."""
    out = {}
    get = out.get
    imgs = [(i, UNITS[i], list(img.items())) for i, img in enumerate(images) if img]
    for key, a in f.items():
        for i, unit, items in imgs:
            e = (key >> (SHIFT * i)) & MASK
            if not e:
                continue
            base = key - unit - CBIAS
            ea = e * a
            for k2, b in items:
                k = base + k2
                out[k] = get(k, 0) + ea * b
    return {k: v for k, v in out.items() if v}
