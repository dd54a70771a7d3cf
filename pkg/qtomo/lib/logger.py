import logging


class SDKLogger:
    @staticmethod
    def getLogger(logger_name):
        return logging.getLogger(logger_name)

    @staticmethod
    def configure(verbose: bool = False):
        """Attach a console handler to the root logger. Only the CLI calls this;
        library code never configures handlers.
        """
        logging.basicConfig(
            level=logging.DEBUG if verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
