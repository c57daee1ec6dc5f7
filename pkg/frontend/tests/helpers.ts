import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { parseBundle } from '../src/bundle.js';
import { Bundle, BundleFileName, BUNDLE_FILES, Fetcher } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

export const FIXTURE_DIR = join(here, 'fixture', 'bundle');

export function readFixtureTexts(): Map<string, string> {
  const texts = new Map<string, string>();
  for (const name of BUNDLE_FILES) {
    texts.set(name, readFileSync(join(FIXTURE_DIR, name), 'utf8'));
  }
  return texts;
}

export function fixtureFetcher(overrides?: Map<string, string>): Fetcher {
  const texts = readFixtureTexts();
  if (overrides) {
    for (const [name, body] of overrides) {
      texts.set(name, body);
    }
  }
  return async (name: BundleFileName) => {
    const body = texts.get(name);
    if (body === undefined) {
      throw new Error('missing');
    }
    return body;
  };
}

export function loadFixtureBundle(): Bundle {
  return parseBundle(readFixtureTexts());
}
