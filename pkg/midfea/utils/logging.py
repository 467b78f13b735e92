#===============================================================================
#
#  MidFea mid-level feature learning tools
#
#  Copyright (c) 2021  MidFea developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
#===============================================================================

import logging

#===============================================================================

import tqdm

#===============================================================================

from midfea.settings import settings

#===============================================================================

LOGGER_NAME = 'midfea'

_logger = logging.getLogger(LOGGER_NAME)

#===============================================================================

class log(object):
    def __init__(self, *args):
        _logger.info(''.join(str(arg) for arg in args))

    @staticmethod
    def debug(*args):
        _logger.debug(''.join(str(arg) for arg in args))

    @staticmethod
    def error(*args):
        _logger.error(''.join(str(arg) for arg in args))

    @staticmethod
    def exception(*args):
        _logger.exception(''.join(str(arg) for arg in args))

    @staticmethod
    def info(*args):
        _logger.info(''.join(str(arg) for arg in args))

    @staticmethod
    def warning(*args):
        _logger.warning(''.join(str(arg) for arg in args))

#===============================================================================

def configure_logging(options):
#==============================
    """
    Set up logging from command line options.

    ``silent`` implies ``quiet``. Messages go to the screen unless ``silent``
    and are appended to ``log_file`` when one is given.
    """
    if options.get('silent', False):
        options['quiet'] = True
    level = logging.DEBUG if options.get('debug', False) else logging.INFO
    log_file = options.get('log_file')
    root = logging.getLogger()
    if not options.get('silent', False):
        if options.get('quiet', False):
            logging.basicConfig(format='%(asctime)s %(message)s')
        else:
            logging.basicConfig(format='%(message)s')
        root.setLevel(level)
        if log_file is not None:
            handler = logging.FileHandler(log_file)
            handler.setFormatter(logging.Formatter('%(asctime)s %(message)s'))
            root.addHandler(handler)
    elif log_file is not None:
        logging.basicConfig(
            format='%(asctime)s %(message)s',
            filename=log_file,
            level=level
        )
    else:
        root.setLevel(logging.CRITICAL)

#===============================================================================

class ProgressBar(object):
    def __init__(self, *args, show=True, **kwargs):
        if show and not settings.get('quiet', False):
            kwargs.setdefault('ncols', 60)
            kwargs.setdefault('bar_format', '{l_bar}{bar}| {n_fmt}/{total_fmt}')
            self.__progress_bar = tqdm.tqdm(*args, **kwargs)
        else:
            self.__progress_bar = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def update(self, *args):
    #=======================
        if self.__progress_bar is not None:
            self.__progress_bar.update(*args)

    def set_postfix(self, **kwargs):
    #===============================
        if self.__progress_bar is not None:
            self.__progress_bar.set_postfix(**kwargs)

    def close(self):
    #===============
        if self.__progress_bar is not None:
            self.__progress_bar.close()

#===============================================================================
