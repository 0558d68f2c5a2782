"""Configuration management package."""