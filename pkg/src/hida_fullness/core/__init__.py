"""Configuration, pipelines, the job runner and the selftest."""
