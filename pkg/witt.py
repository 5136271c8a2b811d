#!/usr/bin/env python3
"""witt-strata Start Script
Simple launcher that passes commands to main.py
"""

import sys
import subprocess
import os


def main():
    """Main entry point"""
    main_script = os.path.join(os.path.dirname(os.path.abspath(__file__)), "src", "main.py")

    # Pass all arguments through; the exit code carries the verdict
    args = [sys.executable, main_script] + sys.argv[1:]

    try:
        result = subprocess.run(args)
    except KeyboardInterrupt:
        print("\n\nExiting...")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
    sys.exit(result.returncode)


if __name__ == "__main__":
    main()
