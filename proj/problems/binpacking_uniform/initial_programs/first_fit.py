def entrypoint(context):
    out = []
    for inst in context["instances"]:
        cap = inst["capacity"]
        loads = []
        assignment = []
        for item in inst["items"]:
            for b, load in enumerate(loads):
                if load + item <= cap:
                    loads[b] += item
                    assignment.append(b)
                    break
            else:
                loads.append(item)
                assignment.append(len(loads) - 1)
        out.append(assignment)
    return out
