"""HTTP service layer (FastAPI app and pydantic models)."""
