#!/usr/bin/env python3
"""
Defect Ladder Score Table

Generates synthetic performances with increasing form defects and prints the
performance score of each against the defect-free performance. Lower is better;
scores should rise with every step of the ladder.
"""

import argparse
import logging
import os
from datetime import datetime

from form_analyzer.analysis.analyzer_factory import AnalyzerFactory
from form_analyzer.synthgen.base_template import DefectKind
from form_analyzer.synthgen.generator import defect_ladder
from form_analyzer.synthgen.template_factory import TemplateFactory
from form_analyzer.utils.data_handler import DataHandler
from form_analyzer.utils.logger import setup_logging

DEFAULT_MAGNITUDES = [0.0, 0.05, 0.1, 0.2]


def run_ladder(templates, magnitudes, seed=0, output_file=None):
    """
    Score defect ladders for each template and defect kind.

    Args:
        templates (list): Exercise templates to generate.
        magnitudes (list): Strictly increasing defect magnitudes, starting at 0.
        seed (int): Seed shared by every generated stream.
        output_file (str, optional): CSV file for the score table.

    Returns:
        list: One row per (template, defect, magnitude).
    """
    setup_logging(log_level=logging.WARNING, log_to_file=False)
    analyzer = AnalyzerFactory.create_analyzer("compare")
    rows = []

    for template in templates:
        print(f"\n=== {template.kind.value} ===")
        print("\n| Defect          | Magnitude | E_p (m)  | E_s (m/s) | E_b      | PS       |")
        print("|-----------------|-----------|----------|-----------|----------|----------|")

        for defect in DefectKind:
            streams = defect_ladder(template, defect, magnitudes, seed)
            reference = streams[0]
            for magnitude, stream in zip(magnitudes, streams):
                _, _, score = analyzer.compare(stream, reference)
                rows.append({
                    "template": template.kind.value,
                    "defect": defect.value,
                    "magnitude": magnitude,
                    "e_p_m": score.e_p_m,
                    "e_s_mps": score.e_s_mps,
                    "e_b": score.e_b,
                    "ps": score.ps,
                })
                print(
                    f"| {defect.value:<15} | {magnitude:<9.3f} | {score.e_p_m:.6f} | "
                    f"{score.e_s_mps:.6f}  | {score.e_b:.6f} | {score.ps:.6f} |"
                )

    if output_file:
        DataHandler.write_csv(output_file, rows)
        print(f"\nScore table written to: {output_file}")
    return rows


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Defect ladder score table")
    parser.add_argument("--template", action="append", choices=TemplateFactory.available_kinds(),
                        help="Exercise to generate; repeat for several (default: all)")
    parser.add_argument("--magnitudes", default=",".join(str(m) for m in DEFAULT_MAGNITUDES),
                        help="Comma-separated defect magnitudes")
    parser.add_argument("--seed", type=int, default=0, help="Random seed")
    parser.add_argument("--save", action="store_true", help="Write the table as CSV under output/")
    args = parser.parse_args()

    output_file = None
    if args.save:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        os.makedirs("output", exist_ok=True)
        output_file = f"output/defect_ladder_{timestamp}.csv"

    if args.template:
        templates = [TemplateFactory.create_template(kind) for kind in args.template]
    else:
        templates = TemplateFactory.create_all_templates()

    run_ladder(
        templates,
        [float(m) for m in args.magnitudes.split(",")],
        seed=args.seed,
        output_file=output_file,
    )
