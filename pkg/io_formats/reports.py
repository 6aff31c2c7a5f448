"""
Run reports written next to every CLI result.

A report holds everything needed to reproduce a run: a digest of the inputs,
the configuration, the seed and the tool version. Timings are kept apart and
left out of the report digest, so two runs with the same inputs and config
produce the same digest.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

REPORT_SCHEMA = 1
TOOL_VERSION = "1.0.0"
UNBOUNDED = "unbounded"


def digest_text(*texts):
    """sha256 over the given input texts, each terminated by a NUL separator."""
    h = hashlib.sha256()
    for text in texts:
        h.update(text.encode('utf-8'))
        h.update(b"\0")
    return h.hexdigest()


def _plain(value):
    """JSON-safe copy: infinities become "unbounded", tuples become lists."""
    if isinstance(value, float) and math.isinf(value):
        return UNBOUNDED
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, 'item'):
        # numpy scalar
        return _plain(value.item())
    return value


@dataclass
class RunReport:
    command: str
    input_digest: str
    config: dict
    result: dict
    seed: int = None
    tool_version: str = TOOL_VERSION
    timings: dict = field(default_factory=dict)

    def body(self):
        """Deterministic part of the report."""
        return _plain({
            'schema': REPORT_SCHEMA,
            'command': self.command,
            'tool_version': self.tool_version,
            'seed': self.seed,
            'input_digest': self.input_digest,
            'config': self.config,
            'result': self.result,
        })

    @property
    def report_digest(self):
        return hashlib.sha256(json.dumps(self.body(), sort_keys=True).encode('utf-8')).hexdigest()

    def to_json(self, include_timings=False):
        data = self.body()
        data['report_digest'] = self.report_digest
        if include_timings:
            data['timings'] = _plain(self.timings)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def to_text(self, include_timings=False):
        lines = [f"{self.command} report (schema {REPORT_SCHEMA}, version {self.tool_version})"]
        lines.append(f"  input digest: {self.input_digest}")
        if self.seed is not None:
            lines.append(f"  seed: {self.seed}")
        body = self.body()
        lines.append("  config:")
        lines.extend(_text_block(body['config'], indent=4))
        lines.append("  result:")
        lines.extend(_text_block(body['result'], indent=4))
        if include_timings and self.timings:
            lines.append("  timings (s):")
            lines.extend(f"    {name}: {seconds:.4f}" for name, seconds in sorted(self.timings.items()))
        lines.append(f"  report digest: {self.report_digest}")
        return "\n".join(lines) + "\n"

    def render(self, output_format, include_timings=False):
        if output_format == "json":
            return self.to_json(include_timings)
        return self.to_text(include_timings)


def _text_block(data, indent):
    pad = " " * indent
    lines = []
    for key in sorted(data):
        value = data[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text_block(value, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines
