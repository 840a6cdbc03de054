def entrypoint():
    return 0.1
