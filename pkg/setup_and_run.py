#!/usr/bin/env python3
"""
Setup and demo script for the certified pressure toolkit
"""

import os
import sys
import subprocess
import tempfile

GOLDEN_MEAN = """dim 1
alphabet 0 1
forbidden
(0):1 (1):1
end
si_gap 1
"""

HARD_SQUARES = """dim 2
alphabet 0 1
forbidden
(0,0):1 (1,0):1
(0,0):1 (0,1):1
end
si_gap 1
"""


def run_command(command, description):
    """Run a command and handle errors"""
    print(f"\n{'='*50}")
    print(f"🔧 {description}")
    print(f"{'='*50}")

    try:
        result = subprocess.run(command, shell=True, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        if result.stdout:
            print(result.stdout)
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Error in {description} (exit {e.returncode}):")
        print(e.stdout)
        print(e.stderr)
        return False


def setup_project():
    """Install requirements, migrate the ledger and run the test suite"""
    print("🚀 Setting up the certified pressure toolkit")

    if sys.version_info < (3, 8):
        print("❌ Python 3.8 or higher is required")
        return False

    print(f"✅ Python version: {sys.version}")

    if not run_command("pip install -r requirements.txt", "Installing requirements"):
        return False

    if not os.path.exists('.env'):
        env_content = """SECRET_KEY=django-insecure-change-this-key
DEBUG=False
CERTIFY_MAX_PATTERNS=1048576
CERTIFY_PRECISION_BITS=128
"""
        with open('.env', 'w') as f:
            f.write(env_content)
        print("✅ Created .env file - adjust the budgets there")

    if not run_command("python manage.py migrate", "Running migrations"):
        return False

    if not run_command("python manage.py test certify", "Running the test suite"):
        print("⚠️ Warning: some tests failed")

    print("\n" + "="*60)
    print("🎉 Setup completed successfully!")
    print("="*60)
    print("📝 Try:")
    print("   python manage.py entropy --sft golden.sft --precision 20")
    print("   python manage.py pressure --sft hard_squares.sft --method sandwich --box-side 8")
    print("="*60)
    return True


def run_demo():
    """Certify a few entropies with the sample SFT files"""
    with tempfile.TemporaryDirectory() as tmp:
        golden = os.path.join(tmp, 'golden.sft')
        hard = os.path.join(tmp, 'hard_squares.sft')
        with open(golden, 'w') as f:
            f.write(GOLDEN_MEAN)
        with open(hard, 'w') as f:
            f.write(HARD_SQUARES)
        run_command(f"python manage.py entropy --sft {golden} --precision 20", "Golden mean entropy")
        run_command(f"python manage.py entropy --sft {hard} --method sandwich --box-side 8",
                    "Hard squares entropy (sandwich, side 8)")


if __name__ == "__main__":
    if len(sys.argv) > 1 and sys.argv[1] == "demo":
        run_demo()
    else:
        if setup_project():
            demo_choice = input("\nDo you want to run the demo now? (y/n): ").lower().strip()
            if demo_choice == 'y':
                run_demo()
