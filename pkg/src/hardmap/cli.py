"""Command-line entry point: run an analysis, validate or serve a bundle."""

import argparse
import sys

from .pipeline import (
    BundleValidationError,
    PipelineError,
    RunConfig,
    run_pipeline,
    validate_bundle,
    write_bundle,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hardmap",
        description="Hardness embedding of a labeled dataset: measures, "
                    "classifier pool, 2-D projection, and footprints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the full analysis from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the JSON run config")

    p_serve = sub.add_parser("serve", help="serve a bundle directory over HTTP")
    p_serve.add_argument("--dir", required=True, help="bundle directory")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--host", default="127.0.0.1")

    p_val = sub.add_parser("validate", help="check a bundle directory")
    p_val.add_argument("--dir", required=True, help="bundle directory")
    return parser


def _cmd_run(args):
    try:
        config = RunConfig.from_json(args.config)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        bundle = run_pipeline(config)
        paths = write_bundle(bundle, config.output_dir)
    except (PipelineError, OSError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    print(f"analyzed {bundle.n_instances} instances with "
          f"{len(bundle.perf.algorithm_names)} learners")
    print(f"bundle written to {config.output_dir} ({len(paths)} files)")
    return 0


def _cmd_serve(args):
    from .server import serve_bundle

    try:
        server = serve_bundle(args.dir, port=args.port, host=args.host, verbose=True)
    except BundleValidationError as exc:
        print(f"invalid bundle: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    print(f"serving {args.dir} at http://{args.host}:{args.port}/ (Ctrl+C stops)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_validate(args):
    try:
        summary = validate_bundle(args.dir)
    except BundleValidationError as exc:
        print(f"invalid bundle: {exc}", file=sys.stderr)
        return 1
    print(f"bundle OK: {summary['n_instances']} instances, "
          f"{len(summary['algorithms'])} algorithms")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "serve": _cmd_serve, "validate": _cmd_validate}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
