"""Experiment orchestration: config, runner, records, emitters."""
