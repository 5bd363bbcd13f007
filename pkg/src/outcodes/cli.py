"""Command-line client for the outcodes service.

Every command talks to the HTTP API: by default an in-process instance of
the FastAPI app (no server needed), or a remote one when ``--server URL``
is given.  The service does the numerics and returns documents; the CLI
owns all file I/O and writes outputs atomically (temp file then rename).

Exit codes: 0 success, 1 usage error, 2 data/file error, 3 training
divergence, 4 gradient-check failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
import warnings
from pathlib import Path

import httpx

from .encoding import SCHEME_NAMES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DIVERGENCE = 3
EXIT_GRADCHECK = 4

_KIND_EXIT_CODES = {"usage": EXIT_USAGE, "data": EXIT_DATA, "divergence": EXIT_DIVERGENCE}

_SCHEME_HELP = 'output code: "one-to-one", "binary", or "reduced-one-hot"'


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits with the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def make_client(server: str | None) -> httpx.Client:
    """HTTP client against *server*, or the app mounted in-process."""
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    with warnings.catch_warnings():
        # starlette warns about its httpx-backed test client; in-process
        # mounting is exactly what we want here.
        warnings.simplefilter("ignore", Warning)
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def parse_config_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment, blanks ignored."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise _CliError(EXIT_USAGE, f"cannot read config file: {exc}") from exc
    values: dict[str, str] = {}
    for number, line in enumerate(raw.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, separator, value = stripped.partition("=")
        if not separator:
            raise _CliError(
                EXIT_USAGE, f"config line {number}: expected 'key = value'"
            )
        values[key.strip()] = value.strip()
    return values


def _load_config(args) -> dict[str, str]:
    config_path = getattr(args, "config", None)
    return parse_config_file(config_path) if config_path else {}


def _resolve(args, config, flag_dest, config_key, cast, default=None):
    value = getattr(args, flag_dest, None)
    if value is not None:
        return value
    if config_key in config:
        try:
            return cast(config[config_key])
        except ValueError as exc:
            raise _CliError(
                EXIT_USAGE, f"config key {config_key!r}: {exc}"
            ) from exc
    return default


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _resolve_normalize(args, config) -> bool:
    if args.no_normalize:
        return False
    if "normalize" in config:
        try:
            return _parse_bool(config["normalize"])
        except ValueError as exc:
            raise _CliError(EXIT_USAGE, f"config key 'normalize': {exc}") from exc
    return True


def _require(value, name: str):
    if value is None:
        raise _CliError(EXIT_USAGE, f"missing required option --{name}")
    return value


def _check_scheme(name: str) -> str:
    if name not in SCHEME_NAMES:
        raise _CliError(
            EXIT_USAGE,
            f"unknown scheme {name!r}; valid schemes: {', '.join(SCHEME_NAMES)}",
        )
    return name


def _read_data_file(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _CliError(EXIT_DATA, f"cannot read data file: {exc}") from exc


def write_text_atomic(path, text: str):
    """Write via a temp file in the same directory, then rename over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    descriptor, temp_name = tempfile.mkstemp(
        dir=path.parent, prefix=path.name + ".tmp"
    )
    try:
        with os.fdopen(descriptor, "w") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except OSError:
        try:
            os.unlink(temp_name)
        except OSError:
            pass
        raise


def _post(client, path: str, payload: dict) -> dict:
    try:
        response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise _CliError(EXIT_USAGE, f"service unreachable: {exc}") from exc
    if response.status_code == 200:
        return response.json()
    raise _response_error(response)


def _response_error(response) -> _CliError:
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = None
    if response.status_code == 422:
        return _CliError(EXIT_USAGE, f"invalid request: {detail}")
    if isinstance(detail, dict) and "kind" in detail:
        kind = detail.get("kind", "usage")
        message = detail.get("message", "request failed")
        return _CliError(_KIND_EXIT_CODES.get(kind, EXIT_USAGE), message)
    return _CliError(
        EXIT_USAGE, f"service error (HTTP {response.status_code}): {detail}"
    )


def _norm_sidecar(model_path: Path) -> Path:
    return model_path.with_name(model_path.stem + ".norm" + model_path.suffix)


# --------------------------------------------------------------------------
# command handlers


def _cmd_train(args) -> int:
    config = _load_config(args)
    data_path = _require(
        _resolve(args, config, "data", "data", str), "data"
    )
    scheme = _check_scheme(
        _require(_resolve(args, config, "scheme", "scheme", str), "scheme")
    )
    payload = {
        "csv_text": _read_data_file(data_path),
        "scheme": scheme,
        "hidden_width": _resolve(args, config, "hidden", "hidden", int),
        "eta": _resolve(args, config, "eta", "eta", float),
        "max_iterations": _resolve(args, config, "iters", "max-iterations", int),
        "seed": _resolve(args, config, "seed", "seed", int, 0),
        "init_half_width": _resolve(
            args, config, "init_half_width", "init-half-width", float, 0.5
        ),
        "normalize": _resolve_normalize(args, config),
    }
    with make_client(args.server) as client:
        result = _post(client, "/train", payload)

    out_dir = Path(_resolve(args, config, "out", "out", str, "."))
    model_path = out_dir / "model.txt"
    write_text_atomic(model_path, result["model_text"])
    write_text_atomic(out_dir / "history.tsv", result["history_text"])
    if result["scaling_text"] is not None:
        write_text_atomic(_norm_sidecar(model_path), result["scaling_text"])
    print(
        f"trained {result['scheme']} net "
        f"{result['n_features']}-{result['hidden_width']}-{result['output_width']} "
        f"for {result['max_iterations']} iterations (eta {result['eta']}, "
        f"seed {result['seed']})"
    )
    print(f"final E: {result['final_error']}")
    print(f"training accuracy: {result['training_accuracy']}")
    print(f"wrote {model_path} and {out_dir / 'history.tsv'}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = _load_config(args)
    data_path = _require(_resolve(args, config, "data", "data", str), "data")
    model_path = Path(
        _require(_resolve(args, config, "model", "model", str), "model")
    )
    scheme = _check_scheme(
        _require(_resolve(args, config, "scheme", "scheme", str), "scheme")
    )
    try:
        model_text = model_path.read_text()
    except OSError as exc:
        raise _CliError(EXIT_DATA, f"cannot read model file: {exc}") from exc
    scaling_path = _resolve(args, config, "scaling", "scaling", str)
    if scaling_path is None and _norm_sidecar(model_path).exists():
        scaling_path = _norm_sidecar(model_path)
    scaling_text = None
    if scaling_path is not None:
        try:
            scaling_text = Path(scaling_path).read_text()
        except OSError as exc:
            raise _CliError(EXIT_DATA, f"cannot read scaling file: {exc}") from exc
    payload = {
        "csv_text": _read_data_file(data_path),
        "model_text": model_text,
        "scheme": scheme,
        "scaling_text": scaling_text,
    }
    with make_client(args.server) as client:
        result = _post(client, "/eval", payload)
    print(
        f"{result['sample_count']} samples: {result['correct']} correct, "
        f"{result['wrong']} wrong, {result['rejected']} rejected"
    )
    print(f"accuracy: {result['accuracy']}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = _load_config(args)
    data_path = _require(_resolve(args, config, "data", "data", str), "data")
    schemes_value = _resolve(
        args, config, "schemes", "schemes", str, "one-to-one,binary"
    )
    schemes = [
        _check_scheme(name.strip())
        for name in schemes_value.split(",")
        if name.strip()
    ]
    if not schemes:
        raise _CliError(EXIT_USAGE, "no schemes requested")
    payload = {
        "csv_text": _read_data_file(data_path),
        "schemes": schemes,
        "folds": _resolve(args, config, "folds", "folds", int, 5),
        "repeats": _resolve(args, config, "repeats", "repeats", int, 20),
        "hidden_width": _resolve(args, config, "hidden", "hidden", int),
        "eta": _resolve(args, config, "eta", "eta", float),
        "max_iterations": _resolve(args, config, "iters", "max-iterations", int),
        "seed": _resolve(args, config, "seed", "seed", int, 0),
        "init_half_width": _resolve(
            args, config, "init_half_width", "init-half-width", float, 0.5
        ),
        "normalize": _resolve_normalize(args, config),
        "jobs": _resolve(args, config, "jobs", "jobs", int, 1),
    }
    with make_client(args.server) as client:
        result = _post(client, "/experiment", payload)

    out_dir = Path(_resolve(args, config, "out", "out", str, "."))
    for report in result["reports"]:
        name = report["scheme"]
        write_text_atomic(out_dir / f"report_{name}.csv", report["report_text"])
        write_text_atomic(
            out_dir / f"curve_avg_{name}.tsv", report["averaged_curve_text"]
        )
        write_text_atomic(
            out_dir / f"curve_best_{name}.tsv", report["best_curve_text"]
        )
    write_text_atomic(out_dir / "comparison.txt", result["comparison_text"])
    print(
        f"{result['folds']}-fold x {result['repeats']} repeats on "
        f"{result['sample_count']} samples ({result['class_count']} classes); "
        f"net {result['n_features']}-{result['hidden_width']}-*, "
        f"eta {result['eta']}, {result['max_iterations']} iterations"
    )
    print(result["comparison_text"], end="")
    print(f"wrote report files to {out_dir}")
    return EXIT_OK


def _cmd_gen_synthetic(args) -> int:
    config = _load_config(args)
    kind = _resolve(args, config, "kind", "kind", str, "blobs")
    if kind not in ("blobs", "quadrant"):
        raise _CliError(EXIT_USAGE, f"unknown kind {kind!r}; use blobs or quadrant")
    payload = {
        "kind": kind,
        "class_count": _resolve(args, config, "classes", "classes", int, 4),
        "points_per_class": _resolve(args, config, "points", "points", int, 50),
        "spread": _resolve(args, config, "spread", "spread", float, 0.15),
        "margin": _resolve(args, config, "margin", "margin", float, 0.1),
        "seed": _resolve(args, config, "seed", "seed", int, 0),
    }
    with make_client(args.server) as client:
        result = _post(client, "/datasets/synthetic", payload)
    out_path = Path(_resolve(args, config, "out", "out", str, "dataset.csv"))
    write_text_atomic(out_path, result["csv_text"])
    print(
        f"wrote {result['sample_count']} samples "
        f"({result['class_count']} classes, {result['n_features']} features) "
        f"to {out_path}"
    )
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    config = _load_config(args)
    payload = {
        "instances": _resolve(args, config, "instances", "instances", int, 100),
        "seed": _resolve(args, config, "seed", "seed", int, 0),
        "step": _resolve(args, config, "step", "step", float, 1e-5),
        "tolerance": _resolve(args, config, "tol", "tol", float, 1e-5),
        "corrupt": bool(args.corrupt),
    }
    with make_client(args.server) as client:
        result = _post(client, "/gradcheck", payload)
    print(
        f"checked {result['instances']} instances; "
        f"max relative error: {result['max_relative_error']:.6g}"
    )
    if not result["passed"]:
        print(
            f"FAILED at coordinate {result['worst_coordinate']} "
            f"(instance {result['worst_instance_index']}, "
            f"seed {result['worst_instance_seed']})",
            file=sys.stderr,
        )
        return EXIT_GRADCHECK
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("outcodes.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser wiring


def _add_common(subparser):
    subparser.add_argument(
        "--server",
        help="base URL of a running service; default runs the service in-process",
    )
    subparser.add_argument(
        "--config", help="key = value config file; explicit flags override it"
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="outcodes",
        description="Train and compare output codes for sigmoid classifiers.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser(
        "train", help="train one network on a CSV dataset", parents=[]
    )
    train.add_argument("--data", help="CSV dataset, integer label in last column")
    train.add_argument("--scheme", choices=SCHEME_NAMES, help=_SCHEME_HELP)
    train.add_argument("--hidden", type=int, dest="hidden", help="hidden width (0 = none)")
    train.add_argument("--eta", type=float, help="learning rate")
    train.add_argument("--iters", type=int, help="full-batch iterations")
    train.add_argument("--seed", type=int, help="master seed (default 0)")
    train.add_argument(
        "--init-half-width", type=float, dest="init_half_width",
        help="uniform init range half-width (default 0.5)",
    )
    train.add_argument(
        "--no-normalize", action="store_true",
        help="skip min-max feature scaling",
    )
    train.add_argument("--out", help="output directory (default .)")
    _add_common(train)
    train.set_defaults(handler=_cmd_train)

    evaluate = commands.add_parser(
        "eval", help="evaluate a saved model on a CSV dataset"
    )
    evaluate.add_argument("--data", help="CSV dataset to score")
    evaluate.add_argument("--model", help="model file written by train")
    evaluate.add_argument("--scheme", choices=SCHEME_NAMES, help=_SCHEME_HELP)
    evaluate.add_argument(
        "--scaling",
        help="feature scaling table; defaults to the model's .norm sidecar",
    )
    _add_common(evaluate)
    evaluate.set_defaults(handler=_cmd_eval)

    experiment = commands.add_parser(
        "experiment",
        help="repeated stratified cross-validation comparing output codes",
    )
    experiment.add_argument("--data", help="CSV dataset")
    experiment.add_argument(
        "--schemes",
        help='comma-separated subset of "one-to-one", "binary", '
        '"reduced-one-hot" (default one-to-one,binary)',
    )
    experiment.add_argument("--folds", type=int, help="fold count (default 5)")
    experiment.add_argument("--repeats", type=int, help="repeat count (default 20)")
    experiment.add_argument("--hidden", type=int, help="hidden width (0 = none)")
    experiment.add_argument("--eta", type=float, help="learning rate")
    experiment.add_argument("--iters", type=int, help="full-batch iterations")
    experiment.add_argument("--seed", type=int, help="master seed (default 0)")
    experiment.add_argument(
        "--init-half-width", type=float, dest="init_half_width",
        help="uniform init range half-width (default 0.5)",
    )
    experiment.add_argument(
        "--no-normalize", action="store_true",
        help="skip per-run min-max feature scaling",
    )
    experiment.add_argument(
        "--jobs", type=int, help="max concurrent runs (default 1; same output)"
    )
    experiment.add_argument("--out", help="output directory (default .)")
    _add_common(experiment)
    experiment.set_defaults(handler=_cmd_experiment)

    synthetic = commands.add_parser(
        "gen-synthetic", help="generate a blobs or quadrant CSV dataset"
    )
    synthetic.add_argument(
        "--kind", choices=("blobs", "quadrant"), help="generator (default blobs)"
    )
    synthetic.add_argument("--classes", type=int, help="blob count (default 4)")
    synthetic.add_argument("--points", type=int, help="points per class (default 50)")
    synthetic.add_argument("--spread", type=float, help="blob stddev (default 0.15)")
    synthetic.add_argument(
        "--margin", type=float, help="quadrant margin from the axes (default 0.1)"
    )
    synthetic.add_argument("--seed", type=int, help="generator seed (default 0)")
    synthetic.add_argument("--out", help="output CSV path (default dataset.csv)")
    _add_common(synthetic)
    synthetic.set_defaults(handler=_cmd_gen_synthetic)

    gradcheck = commands.add_parser(
        "gradcheck", help="compare backprop against finite differences"
    )
    gradcheck.add_argument(
        "--instances", type=int, help="random instances (default 100)"
    )
    gradcheck.add_argument("--seed", type=int, help="suite seed (default 0)")
    gradcheck.add_argument("--step", type=float, help="difference step (default 1e-5)")
    gradcheck.add_argument("--tol", type=float, help="pass tolerance (default 1e-5)")
    gradcheck.add_argument(
        "--corrupt", action="store_true",
        help="fault injection: corrupt one gradient coordinate (must fail)",
    )
    _add_common(gradcheck)
    gradcheck.set_defaults(handler=_cmd_gradcheck)

    serve = commands.add_parser("serve", help="run the HTTP service with uvicorn")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _CliError as error:
        print(f"outcodes: {error.message}", file=sys.stderr)
        return error.code
    except OSError as error:
        print(f"outcodes: {error}", file=sys.stderr)
        return EXIT_DATA


def entrypoint():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
