"""
parse_workflow: Python source -> WorkflowProgram.

The source is parsed with the standard `ast` module and then walked by
SandboxGuard, which admits only the supported subset. Anything else is
UnsupportedConstruct, naming the construct.
"""

import ast
from dataclasses import dataclass
from typing import List, Tuple

from .builtins import ALL_METHOD_NAMES
from .exceptions import UnsupportedConstruct, WorkflowSyntaxError

ALLOWED_DUNDER_NAMES = {'__name__'}

_REJECTED_STATEMENTS = {
    ast.Import: 'import',
    ast.ImportFrom: 'import',
    ast.With: 'with',
    ast.AsyncWith: 'async',
    ast.ClassDef: 'class',
    ast.Global: 'global',
    ast.Nonlocal: 'nonlocal',
    ast.AsyncFunctionDef: 'async',
    ast.AsyncFor: 'async',
    ast.Delete: 'del',
    ast.Raise: 'raise',
    ast.Assert: 'assert',
}

_REJECTED_EXPRESSIONS = {
    ast.Lambda: 'lambda',
    ast.Set: 'set',
    ast.SetComp: 'set',
    ast.GeneratorExp: 'generator expression',
    ast.Await: 'async',
    ast.Yield: 'yield',
    ast.YieldFrom: 'yield',
    ast.NamedExpr: 'walrus',
    ast.Starred: 'starred',
}

if hasattr(ast, 'Match'):
    _REJECTED_STATEMENTS[ast.Match] = 'match'
if hasattr(ast, 'TryStar'):
    _REJECTED_STATEMENTS[ast.TryStar] = 'except*'

ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.FloorDiv, ast.Mod, ast.Pow)
ALLOWED_UNARYOPS = (ast.Not, ast.USub, ast.UAdd)
ALLOWED_CONSTANTS = (str, int, float, bool, type(None))


@dataclass(frozen=True)
class WorkflowProgram:
    """Разобранная программа; statements - узлы верхнего уровня"""
    source: str
    module: ast.Module

    @property
    def statements(self) -> List[ast.stmt]:
        return list(self.module.body)

    @property
    def defined_functions(self) -> Tuple[str, ...]:
        return tuple(node.name for node in ast.walk(self.module) if isinstance(node, ast.FunctionDef))


class SandboxGuard(ast.NodeVisitor):
    """Проверка подмножества; первая же находка - UnsupportedConstruct"""

    def __init__(self):
        self._function_depth = 0
        self._loop_depth = 0

    # -- helpers ---------------------------------------------------------

    @staticmethod
    def reject(construct: str, node: ast.AST):
        raise UnsupportedConstruct(construct, getattr(node, 'lineno', 0), getattr(node, 'col_offset', 0))

    @staticmethod
    def _syntax(message: str, node: ast.AST):
        raise WorkflowSyntaxError(message, getattr(node, 'lineno', 0), getattr(node, 'col_offset', 0))

    def generic_visit(self, node: ast.AST):
        for node_type, construct in _REJECTED_STATEMENTS.items():
            if isinstance(node, node_type):
                self.reject(construct, node)
        for node_type, construct in _REJECTED_EXPRESSIONS.items():
            if isinstance(node, node_type):
                self.reject(construct, node)
        super().generic_visit(node)

    def _visit_target(self, target: ast.AST, allow_subscript: bool = True):
        if isinstance(target, ast.Name):
            self.visit_Name(target)
        elif isinstance(target, (ast.Tuple, ast.List)):
            for element in target.elts:
                self._visit_target(element, allow_subscript)
        elif isinstance(target, ast.Subscript) and allow_subscript:
            self.visit(target)
        elif isinstance(target, ast.Attribute):
            self.reject('attribute assignment', target)
        elif isinstance(target, ast.Starred):
            self.reject('starred', target)
        else:
            self.reject(type(target).__name__.lower(), target)

    # -- statements ------------------------------------------------------

    def visit_FunctionDef(self, node: ast.FunctionDef):
        if node.decorator_list:
            self.reject('decorator', node.decorator_list[0])
        args = node.args
        if args.vararg or args.kwarg:
            self.reject('star-args', node)
        if args.kwonlyargs:
            self.reject('keyword-only parameters', node)
        for arg in args.posonlyargs + args.args:
            self.visit_arg(arg)
        for default in args.defaults:
            self.visit(default)
        # Annotations are ignored, never evaluated
        outer_loops = self._loop_depth
        self._function_depth += 1
        self._loop_depth = 0
        for statement in node.body:
            self.visit(statement)
        self._function_depth -= 1
        self._loop_depth = outer_loops

    def visit_arg(self, node: ast.arg):
        self._check_name(node.arg, node)

    def visit_Return(self, node: ast.Return):
        if self._function_depth == 0:
            self._syntax("'return' outside function", node)
        if node.value is not None:
            self.visit(node.value)

    def visit_Assign(self, node: ast.Assign):
        for target in node.targets:
            self._visit_target(target)
        self.visit(node.value)

    def visit_AugAssign(self, node: ast.AugAssign):
        if not isinstance(node.op, ALLOWED_BINOPS):
            self.reject(f"operator {type(node.op).__name__}", node)
        self._visit_target(node.target)
        self.visit(node.value)

    def visit_AnnAssign(self, node: ast.AnnAssign):
        self._visit_target(node.target)
        if node.value is not None:
            self.visit(node.value)

    def _visit_loop_body(self, node):
        if node.orelse:
            self.reject('loop-else', node.orelse[0])
        self._loop_depth += 1
        for statement in node.body:
            self.visit(statement)
        self._loop_depth -= 1

    def visit_While(self, node: ast.While):
        self.visit(node.test)
        self._visit_loop_body(node)

    def visit_For(self, node: ast.For):
        self._visit_target(node.target, allow_subscript=False)
        self.visit(node.iter)
        self._visit_loop_body(node)

    def visit_Break(self, node: ast.Break):
        if self._loop_depth == 0:
            self._syntax("'break' outside loop", node)

    def visit_Continue(self, node: ast.Continue):
        if self._loop_depth == 0:
            self._syntax("'continue' not properly in loop", node)

    def visit_ExceptHandler(self, node: ast.ExceptHandler):
        if node.type is not None:
            names = node.type.elts if isinstance(node.type, ast.Tuple) else [node.type]
            for name in names:
                if not isinstance(name, ast.Name):
                    self.reject('computed except clause', name)
                self._check_name(name.id, name)
        if node.name:
            self._check_name(node.name, node)
        for statement in node.body:
            self.visit(statement)

    # -- expressions -----------------------------------------------------

    def _check_name(self, name: str, node: ast.AST):
        if name.startswith('__') and name.endswith('__') and name not in ALLOWED_DUNDER_NAMES:
            self.reject('dunder name', node)

    def visit_Name(self, node: ast.Name):
        self._check_name(node.id, node)

    def visit_Constant(self, node: ast.Constant):
        if not isinstance(node.value, ALLOWED_CONSTANTS):
            self.reject(f"{type(node.value).__name__} literal", node)

    def visit_Attribute(self, node: ast.Attribute):
        # Reached only when the attribute is not a whitelisted method call target
        if node.attr.startswith('__'):
            self.reject('dunder access', node)
        self.reject('attribute access', node)

    def visit_Call(self, node: ast.Call):
        func = node.func
        if isinstance(func, ast.Name):
            self.visit_Name(func)
        elif isinstance(func, ast.Attribute):
            if func.attr.startswith('__'):
                self.reject('dunder access', func)
            if func.attr not in ALL_METHOD_NAMES:
                self.reject('attribute access', func)
            self.visit(func.value)
        else:
            self.reject('computed call', func)
        for arg in node.args:
            if isinstance(arg, ast.Starred):
                self.reject('star-args', arg)
            self.visit(arg)
        for keyword in node.keywords:
            if keyword.arg is None:
                self.reject('star-args', keyword.value)
            self.visit(keyword.value)

    def visit_BinOp(self, node: ast.BinOp):
        if not isinstance(node.op, ALLOWED_BINOPS):
            self.reject(f"operator {type(node.op).__name__}", node)
        self.generic_visit(node)

    def visit_UnaryOp(self, node: ast.UnaryOp):
        if not isinstance(node.op, ALLOWED_UNARYOPS):
            self.reject(f"operator {type(node.op).__name__}", node)
        self.generic_visit(node)

    def visit_FormattedValue(self, node: ast.FormattedValue):
        if node.conversion != -1:
            self.reject('format conversion', node)
        if node.format_spec is not None:
            self.reject('format spec', node)
        self.visit(node.value)

    def _visit_comprehension(self, node):
        if len(node.generators) != 1:
            self.reject('nested comprehension', node)
        generator = node.generators[0]
        if generator.is_async:
            self.reject('async', node)
        self._visit_target(generator.target, allow_subscript=False)
        self.visit(generator.iter)
        for condition in generator.ifs:
            self.visit(condition)

    def visit_ListComp(self, node: ast.ListComp):
        self._visit_comprehension(node)
        self.visit(node.elt)

    def visit_DictComp(self, node: ast.DictComp):
        self._visit_comprehension(node)
        self.visit(node.key)
        self.visit(node.value)

    def visit_Dict(self, node: ast.Dict):
        for key in node.keys:
            if key is None:
                self.reject('dict unpacking', node)
        self.generic_visit(node)


def parse_workflow(source: str, filename: str = '<workflow>') -> WorkflowProgram:
    """
    Разобрать исходник workflow.

    Raises:
        WorkflowSyntaxError: исходник не является корректным Python
        UnsupportedConstruct: конструкция вне подмножества
    """
    try:
        module = ast.parse(source or '', filename=filename, mode='exec')
    except SyntaxError as exc:
        raise WorkflowSyntaxError(exc.msg or 'invalid syntax', exc.lineno or 0, exc.offset or 0) from exc
    except (ValueError, RecursionError, MemoryError) as exc:
        raise WorkflowSyntaxError(f"cannot parse: {type(exc).__name__}") from exc

    try:
        SandboxGuard().visit(module)
    except RecursionError as exc:
        raise UnsupportedConstruct('nesting too deep') from exc
    return WorkflowProgram(source=source or '', module=module)
