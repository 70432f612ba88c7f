import logging
import time

import schedule
from dotenv import load_dotenv

from src.exploration import explore_step
from src.utils import Settings

load_dotenv()

settings = Settings.from_env()


def task_periodicly():
    explore_step(settings)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    schedule.every(settings.explore_minutes).minutes.do(task_periodicly)
    task_periodicly()

    while True:
        schedule.run_pending()
        time.sleep(1)
