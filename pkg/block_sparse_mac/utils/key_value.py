from collections.abc import Iterable, Mapping


class KeyValueSyntaxError(ValueError):
    pass


def parse_key_value_lines(lines: Iterable[str]) -> dict[str, str]:
    """Parse ``key = value`` lines. ``#`` starts a comment, blank lines are skipped."""
    entries: dict[str, str] = {}
    for line_number, raw_line in enumerate(lines, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise KeyValueSyntaxError(
                f"Line {line_number}: expected 'key = value', found {raw_line.strip()!r}"
            )
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise KeyValueSyntaxError(f"Line {line_number}: missing key")
        if key in entries:
            raise KeyValueSyntaxError(f"Line {line_number}: duplicate key {key!r}")
        entries[key] = value
    return entries


def render_key_value(entries: Mapping[str, object]) -> str:
    return "".join(f"{key} = {_format_value(value)}\n" for key, value in entries.items())


def _format_value(value: object) -> str:
    if value is None:
        return "unavailable"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(item) for item in value)
    return str(value)
