"""Workflow tests package."""