import json
import logging
import os
import sys

# Add src/ to path so we can import from there
_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_ROOT, 'src'))

from presets import NEGATIVE_CONTROLS, case_table_labels, expected_star_status, resolve_preset
from starcond import check_star, emit_certificate, load_certificate

# Configure Logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

CHEVLAB_CERT_DIR = os.environ.get('CHEVLAB_CERT_DIR', os.path.join(_ROOT, 'certificates'))
INDEX_FILE = os.path.join(CHEVLAB_CERT_DIR, 'index.json')


def main():
    index = {}
    failures = 0
    labels = case_table_labels() + sorted(NEGATIVE_CONTROLS)
    logger.info(f"Emitting certificates for {len(labels)} presets into {CHEVLAB_CERT_DIR}")

    for label in labels:
        system, delta = resolve_preset(label)
        result = check_star(system, delta)
        path = os.path.join(CHEVLAB_CERT_DIR, label.replace(":", "-") + ".json")
        try:
            emit_certificate(result, path)
            _, valid = load_certificate(path)
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            failures += 1
            continue
        expected = expected_star_status(label)
        status = "ok" if result.ok else "fail"
        if status != expected or not valid:
            logger.error(f"{label}: expected {expected}, got {status} (valid={valid})")
            failures += 1
        index[label] = {"status": status, "file": os.path.basename(path)}

    # Save Index
    try:
        with open(INDEX_FILE, 'w', encoding='utf-8') as f:
            json.dump(index, f, indent=2)
        logger.info(f"Index saved to {INDEX_FILE}")
    except OSError as e:
        logger.error(f"Failed to save index: {e}")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
