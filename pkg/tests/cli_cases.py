"""Invocations covering every CLI subcommand over the bundled fixtures."""

from statfrob.model import BUILTIN_MODELS

MODEL_COMMANDS = [
    ["model", "info"],
    ["model", "probs", "--theta"],
    ["geom", "tensors", "--theta"],
    ["geom", "christoffels", "--alpha", "0.5", "--theta"],
    ["geom", "curvature", "--alpha", "-1", "--theta"],
    ["geom", "pencil-symmetry", "--alpha", "1.5", "--theta"],
    ["frobenius", "check", "--theta"],
    ["toric", "ideal"],
    ["toric", "verify", "--samples", "20"],
]

THETAS = {
    "bernoulli": "0.4",
    "trinomial": "0.3,-0.2",
    "independence-2x2": "0.3,0.7",
    "random-n3m6-seed0": "0.1,-0.2,0.3",
}

OTHER_COMMANDS = [
    ["web", "hexagon", "--web", "cubic", "--center", "1,1", "--eps", "0.02,0.01"],
    ["web", "hexagon", "--web", "sum", "--center", "0.5,0.5", "--eps", "0.1,0.01,0.001"],
    ["web", "curvature", "--web", "cubic", "--at", "1,1"],
    ["web", "ceva", "--point", "0.2,0.3,0.5"],
    ["web", "ceva", "--direction", "0.3,1"],
    ["web", "ceva-n", "--point", "0.1,0.2,0.3,0.4"],
    ["web", "sphere", "--point", "0.2,0.3,0.5"],
    ["web", "fields", "--point", "0.2,0.3,0.5"],
    ["algebra", "cr", "--map", "swap", "--at", "1,2"],
    ["algebra", "subweb", "--web", "mixed"],
]


def all_invocations():
    out = []
    for name in BUILTIN_MODELS:
        for cmd in MODEL_COMMANDS:
            argv = list(cmd[:2]) + [name] + list(cmd[2:])
            if argv[-1] == "--theta":
                argv.append(THETAS[name])
            out.append(argv)
    out.extend(list(c) for c in OTHER_COMMANDS)
    return out
