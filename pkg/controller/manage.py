#!/usr/bin/env python
"""
Command-line utility of the intent-forge controller.

    python manage.py docs
    python manage.py resolve "Please sleep for 5 seconds" --model falcon-3-10b-instruct
    python manage.py bench --fixtures paper.fixtures --out report.md
    python manage.py report records.json --format csv

Exit codes: 0 - configuration resolved (whatever the run outcomes),
2 - configuration or fixture error, 1 - unexpected failure.
"""
import os
import sys


def main(argv=None):
    """Run a management command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings.dev')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(argv or sys.argv)


if __name__ == '__main__':
    main()
