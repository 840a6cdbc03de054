import math


def entrypoint():
    n = 32
    side = math.ceil(math.sqrt(n))
    r = 0.5 / side
    out = []
    for k in range(n):
        i, j = divmod(k, side)
        out.append([(2 * j + 1) * r, (2 * i + 1) * r, r * 0.999])
    return out
