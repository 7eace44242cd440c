# app/services/storage/__init__.py