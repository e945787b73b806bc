"""Synthetic exercise streams with injectable form defects."""

from form_analyzer.synthgen.base_template import DefectKind, DefectSpec, ExerciseKind, ExerciseTemplate
from form_analyzer.synthgen.bench_press import BenchPress
from form_analyzer.synthgen.bicep_curl import BicepCurl
from form_analyzer.synthgen.generator import defect_ladder, generate
from form_analyzer.synthgen.push_press import PushPress
from form_analyzer.synthgen.template_factory import TemplateFactory
