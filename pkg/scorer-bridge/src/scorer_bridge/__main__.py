"""Run the scoring service: python -m scorer_bridge --model PATH --port 8000.

The checkpoint path may also come from the SCORER_MODEL environment
variable.
"""

import argparse
import os
import sys

import uvicorn

from .app import create_app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="scorer-bridge")
    parser.add_argument("--model", default=os.environ.get("SCORER_MODEL"),
                        help="checkpoint path (or set SCORER_MODEL)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--max-tokens", type=int, default=None)
    args = parser.parse_args(argv)
    if not args.model:
        parser.error("--model or SCORER_MODEL is required")
    app = create_app(args.model, max_tokens=args.max_tokens, preload=True)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
