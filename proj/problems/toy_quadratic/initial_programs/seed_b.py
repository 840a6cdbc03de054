def entrypoint():
    return 0.3
