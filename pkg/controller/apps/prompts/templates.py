"""
Fixed prompt template.

The wording lives only here (mirrored in docs/PROMPT_TEMPLATE.md);
bump PROMPT_TEMPLATE_VERSION whenever it changes, since recorded
fixtures were produced against a specific version.
"""

PROMPT_TEMPLATE_VERSION = '1.0'

DEFAULT_ROLE = 'You are a Python 3 code generator'

USER_PROMPT_TEMPLATE = (
    "Generate Python 3 code that resolves the user intention below.\n"
    "\n"
    "Rules:\n"
    "- Answer with a single fenced code block (```python ... ```) and nothing else: "
    "no explanation before or after the block.\n"
    "- Do not import any module. Only the functions listed below and the builtins "
    "len, range, str, int and float are available.\n"
    "- If you define a function, you must also invoke it so that the intention is "
    "actually resolved when the code runs.\n"
    "\n"
    "Available functions:\n"
    "{docs}\n"
    "\n"
    "User intention:\n"
    "{intention}\n"
)
