from apps.cli.base import ControllerCommand
from apps.environment.functions import build_standard_table
from apps.prompts.builder import render_docs


class Command(ControllerCommand):
    help = 'Print the function catalog exactly as the model sees it'

    def handle(self, *args, **options):
        self.stdout.write(render_docs(build_standard_table()))
