def entrypoint():
    s = 2 * 3 ** -0.25
    h = 2 / s
    a, b, c = (0.0, 0.0), (-s / 2, -h), (s / 2, -h)
    weights = [
        (0.80, 0.12, 0.08), (0.60, 0.30, 0.10), (0.55, 0.10, 0.35), (0.40, 0.45, 0.15),
        (0.35, 0.20, 0.45), (0.30, 0.05, 0.65), (0.15, 0.70, 0.15), (0.20, 0.35, 0.45),
        (0.10, 0.15, 0.75), (0.05, 0.85, 0.10), (0.08, 0.52, 0.40),
    ]
    return [[u * a[0] + v * b[0] + w * c[0], u * a[1] + v * b[1] + w * c[1]] for u, v, w in weights]
