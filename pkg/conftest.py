def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale sweeps (deselect with -m 'not slow')")
