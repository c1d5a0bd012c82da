"""Matrix groups, Pink towers, fullness certificates and finite group theory."""
