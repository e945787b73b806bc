import logging

from pydantic import ValidationError

from form_analyzer.exceptions import InvalidTemplateError
from form_analyzer.synthgen.base_template import ExerciseKind, ExerciseTemplate
from form_analyzer.synthgen.bench_press import BenchPress
from form_analyzer.synthgen.bicep_curl import BicepCurl
from form_analyzer.synthgen.push_press import PushPress

logger = logging.getLogger("form_analyzer.template_factory")


class TemplateFactory:
    """
    Factory class for creating exercise templates.

    Templates are looked up by their kind name ("BicepCurl", "PushPress",
    "BenchPress"), case-insensitively.
    """

    _TEMPLATES = {
        ExerciseKind.BICEP_CURL: BicepCurl,
        ExerciseKind.PUSH_PRESS: PushPress,
        ExerciseKind.BENCH_PRESS: BenchPress,
    }

    @staticmethod
    def available_kinds():
        return [kind.value for kind in TemplateFactory._TEMPLATES]

    @staticmethod
    def template_class(kind):
        """
        Look up the template class for a kind name.

        Raises:
            InvalidTemplateError: If the kind is unknown.
        """
        lookup = {k.value.lower(): cls for k, cls in TemplateFactory._TEMPLATES.items()}
        template_cls = lookup.get(str(getattr(kind, "value", kind)).lower())
        if template_cls is None:
            error_msg = f"Unsupported exercise template: {kind}"
            logger.error(error_msg)
            raise InvalidTemplateError(error_msg)
        return template_cls

    @staticmethod
    def create_template(kind, **params) -> ExerciseTemplate:
        """
        Create a template of the given kind.

        Args:
            kind (str): The exercise kind.
            **params: Template fields overriding the defaults.

        Returns:
            ExerciseTemplate: The validated template.

        Raises:
            InvalidTemplateError: If the kind is unknown or a parameter is invalid.
        """
        template_cls = TemplateFactory.template_class(kind)
        try:
            template = template_cls(**params)
        except ValidationError as e:
            error_msg = f"Invalid {template_cls.kind.value} parameters: {str(e)}"
            logger.error(error_msg)
            raise InvalidTemplateError(error_msg) from e

        template.check()
        logger.info(f"Created {template_cls.kind.value} template")
        return template

    @staticmethod
    def create_all_templates():
        """Create one default-parameter template of each kind."""
        return [cls() for cls in TemplateFactory._TEMPLATES.values()]
