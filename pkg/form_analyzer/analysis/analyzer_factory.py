import logging

from form_analyzer.analysis.analyzers import BalanceAnalyzer, ComparisonAnalyzer, PoseMatchAnalyzer, RomAnalyzer

logger = logging.getLogger("form_analyzer.analyzer_factory")


class AnalyzerFactory:
    """
    Factory class for creating analyzers by analysis mode name.
    """

    _ANALYZERS = {
        "pose-match": PoseMatchAnalyzer,
        "rom": RomAnalyzer,
        "balance": BalanceAnalyzer,
        "compare": ComparisonAnalyzer,
    }

    @staticmethod
    def available_modes():
        return list(AnalyzerFactory._ANALYZERS)

    @staticmethod
    def create_analyzer(mode, **options):
        """
        Create an analyzer for the given mode.

        Args:
            mode (str): One of "pose-match", "rom", "balance" or "compare".
            **options: Constructor options of the analyzer.

        Returns:
            FormAnalyzer: An analyzer instance.

        Raises:
            ValueError: If an unsupported mode is specified.
        """
        mode = mode.lower()
        analyzer_cls = AnalyzerFactory._ANALYZERS.get(mode)
        if analyzer_cls is None:
            error_msg = f"Unsupported analysis mode: {mode}"
            logger.error(error_msg)
            raise ValueError(error_msg)

        logger.debug(f"Creating {mode} analyzer")
        return analyzer_cls(**options)
