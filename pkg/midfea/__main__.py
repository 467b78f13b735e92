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

import argparse
import sys

#===============================================================================

from midfea import FeatureMaker, __version__
from midfea.exceptions import EXIT_FAILURE, EXIT_OK, MidFeaError
from midfea.midlevel import PARTITION_PRESETS
from midfea.output import EXPORT_STAGES
from midfea.utils import configure_logging, log

#===============================================================================

def __float_list(text):
    try:
        return [float(value) for value in text.split(',') if value.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, not "{}"'.format(text))

def __print_counts(manifest):
    print(manifest)
    for label, counts in manifest.counts().items():
        print('  {:<16} {}'.format(label, '  '.join('{} {:>5}'.format(split, n)
                                                      for split, n in counts.items())))

def __print_results(results):
    for variant, scores in results.items():
        print('{:<10} {}'.format(variant, '  '.join('{} {:.4f}'.format(name, value)
                                                      for name, value in scores.items())))

#===============================================================================

def __parser():
    parser = argparse.ArgumentParser(prog='midfea',
        description='Learn mid-level image features and classify with them.')

    parser.add_argument('-v', '--version', action='version', version=__version__)

    log_options = parser.add_argument_group('logging')
    log_options.add_argument('--log', dest='log_file', metavar='LOG_FILE',
                        help="append messages to a log file")
    log_options.add_argument('-q', '--quiet', action='store_true',
                        help="don't show progress bars")
    log_options.add_argument('--silent', action='store_true',
                        help='suppress all messages to screen')
    log_options.add_argument('--debug', action='store_true',
                        help='show debugging messages')

    run_options = parser.add_argument_group('run')
    run_options.add_argument('--config', metavar='CONFIG_FILE',
                        help='file of "key = value" settings')
    run_options.add_argument('--seed', type=int,
                        help='seed for every random stream (overrides the configuration)')
    run_options.add_argument('--threads', metavar='N', type=int, default=1,
                        help='worker threads for feature extraction (defaults to 1)')
    run_options.add_argument('--out', dest='output', metavar='MODEL_DIR', default='./midfea-model',
                        help='directory of model artifacts (defaults to ./midfea-model)')

    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    synth = commands.add_parser('synth', help='generate a synthetic texture dataset')
    synth.add_argument('dataset', metavar='DATASET_DIR', help='where to write the dataset')
    synth.add_argument('--classes', type=int, default=4, help='number of classes (defaults to 4)')
    synth.add_argument('--per-class', dest='per_class', type=int, default=80,
                        help='images per class (defaults to 80)')
    synth.add_argument('--size', type=int, default=64, help='image side in pixels (defaults to 64)')

    check = commands.add_parser('ingest-check', help='check a dataset and show its class counts')
    check.add_argument('dataset', metavar='DATASET', help='dataset directory or manifest')

    learn = commands.add_parser('learn', help='learn filters, codebook and projection')
    learn.add_argument('dataset', metavar='DATASET', help='dataset directory or manifest')

    extract = commands.add_parser('extract', help='extract features of training and test images')
    extract.add_argument('dataset', metavar='DATASET', help='dataset directory or manifest')

    commands.add_parser('train-ns', help='train the Neuron-Selectivity layer')
    commands.add_parser('train-clf', help='train linear classifiers')

    evaluate = commands.add_parser('eval', help='classify the test features')
    evaluate.add_argument('--raw-baseline', dest='raw_dataset', metavar='DATASET',
                        help='also classify the raw pixels of this dataset')

    bench = commands.add_parser('bench', help='time each pipeline stage on an image')
    bench.add_argument('image', metavar='IMAGE')
    bench.add_argument('--repeats', type=int, default=5, help='timing repeats (defaults to 5)')

    maps = commands.add_parser('export-maps', help='write the intermediate maps of an image')
    maps.add_argument('image', metavar='IMAGE')
    maps.add_argument('--stage', choices=EXPORT_STAGES, required=True)
    maps.add_argument('--to', dest='map_dir', metavar='DIR', required=True,
                        help='directory for the maps')

    sweep = commands.add_parser('sweep', help='test accuracy as an NS parameter varies')
    sweep.add_argument('parameter', choices=['alpha', 'beta', 'gamma', 'lambda', 'd'])
    sweep.add_argument('values', type=__float_list, metavar='VALUES',
                        help='comma separated parameter values')

    parser.epilog = 'Partition presets: {}'.format(', '.join('{} ({})'.format(name, spec)
                                                    for name, spec in PARTITION_PRESETS.items()))
    return parser

#===============================================================================

def __run(maker, args):
    command = args.command
    if command == 'synth':
        manifest = maker.synth(args.dataset, args.classes, args.per_class, args.size)
        __print_counts(manifest)
    elif command == 'ingest-check':
        __print_counts(maker.ingest_check(args.dataset))
    elif command == 'learn':
        maker.learn(args.dataset)
    elif command == 'extract':
        maker.extract(args.dataset)
    elif command == 'train-ns':
        maker.train_ns()
    elif command == 'train-clf':
        maker.train_clf()
    elif command == 'eval':
        __print_results(maker.eval(args.raw_dataset))
    elif command == 'bench':
        print(maker.bench(args.image, args.repeats).table())
    elif command == 'export-maps':
        paths = maker.export_maps(args.image, args.map_dir, args.stage)
        log.info('Wrote {} maps to {}'.format(len(paths), args.map_dir))
    elif command == 'sweep':
        values = [int(value) if args.parameter == 'd' and value.is_integer() else value
                  for value in args.values]
        for value, score in maker.sweep(args.parameter, values):
            print('{} = {}: accuracy {:.4f}'.format(args.parameter, value, score))

def main(argv=None):
#===================
    args = __parser().parse_args(argv)
    options = vars(args)
    configure_logging(options)
    try:
        __run(FeatureMaker(options), args)
    except MidFeaError as error:
        log.error(str(error))
        return error.exit_code
    except Exception as error:
        log.exception(str(error))
        return EXIT_FAILURE
    return EXIT_OK

#===============================================================================

if __name__ == '__main__':
    sys.exit(main())

#===============================================================================
