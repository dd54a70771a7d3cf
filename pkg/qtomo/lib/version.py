try:
    from importlib import metadata
except ImportError:
    # Running on pre-3.8 Python; use importlib-metadata package
    import importlib_metadata as metadata


class ClientVersion:
    @staticmethod
    def version():
        try:
            return metadata.version("qtomo")
        except metadata.PackageNotFoundError:
            # Running from a source checkout
            return "unknown"
