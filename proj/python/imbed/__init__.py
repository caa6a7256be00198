"""Python access to the imbed core: normal forms, graph checks and the CLI commands."""

import json

from ._imbed import GraphProduct, ImbedError, commands, is_irreducible, normalize_config
from ._imbed import run as _run

__all__ = ["GraphProduct", "ImbedError", "commands", "is_irreducible", "normalize_config", "run"]


def run(command, config, **flags):
    """Run a CLI command on a config (JSON text or dict). Returns (exit_code, report dict)."""
    if not isinstance(config, str):
        config = json.dumps(config)
    code, report = _run(command, config, **flags)
    return code, json.loads(report)
