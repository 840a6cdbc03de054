def entrypoint():
    vecs = []
    for i in range(12):
        for j in range(i + 1, 12):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [0] * 12
                    v[i] = si
                    v[j] = sj
                    vecs.append(v)
    return vecs
