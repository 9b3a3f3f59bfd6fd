import contextlib

import click


def open_text(source, mode='r'):
    """Open a path (``-`` for stdin/stdout) or pass an open stream through."""
    if hasattr(source, 'read') or hasattr(source, 'write'):
        return contextlib.nullcontext(source)
    return click.open_file(str(source), mode, encoding='utf-8')
