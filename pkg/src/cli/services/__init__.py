from cli.services.output import write_csv, write_json, write_jsonl

__all__ = ["write_csv", "write_json", "write_jsonl"]
