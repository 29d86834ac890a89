"""A lambda-mu workbench with intersection and product types."""
