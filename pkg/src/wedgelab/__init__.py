"""Causal symmetric spaces, wedge domains and de Sitter geometry."""
