"""Minimal protocol peer used by the subprocess executor tests.

Reads one request frame from stdin, answers with one response frame.
Sources may set RUNNER_MODE to exercise misbehaving peers.
"""
import inspect
import json
import os
import sys
import time
import traceback


def respond(frame):
    sys.stdout.write(json.dumps(frame) + "\n")
    sys.stdout.flush()


def main():
    request = json.loads(sys.stdin.readline())
    source = request["source"]
    entry = request.get("entry", "entrypoint")
    try:
        code = compile(source, "<candidate>", "exec")
    except SyntaxError as e:
        respond({"ok": False, "error": {"type": "SyntaxError", "message": str(e), "traceback": ""}})
        return
    namespace = {}
    try:
        exec(code, namespace)
        mode = namespace.get("RUNNER_MODE")
        if mode == "garbage":
            sys.stdout.write("this is not json\n")
            return
        if mode == "silent_exit":
            os._exit(3)
        if mode == "spawn_sleeper":
            pid = os.fork()
            if pid == 0:
                time.sleep(60)
                os._exit(0)
            with open(namespace["PID_FILE"], "w") as f:
                f.write(str(pid))
            time.sleep(60)
        fn = namespace.get(entry)
        if fn is None:
            respond({"ok": False, "error": {"type": "MissingEntrypoint", "message": "missing " + entry,
                                            "traceback": ""}})
            return
        if request["op"] == "parse":
            respond({"ok": True, "value": None})
            return
        args = [request.get("context")] if inspect.signature(fn).parameters else []
        respond({"ok": True, "value": fn(*args)})
    except Exception as e:
        respond({"ok": False, "error": {"type": type(e).__name__, "message": str(e),
                                        "traceback": traceback.format_exc()}})


if __name__ == "__main__":
    main()
