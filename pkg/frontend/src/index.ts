/**
 * TypeScript bindings for the wwho multilingual tokenizer.
 *
 * Every operation delegates to the core package's command-line interface
 * over a spawned process; no tokenization logic is re-implemented here, so
 * outputs are byte-for-byte what the core produces. The handle is
 * immutable and safe to share: each call spawns its own process.
 *
 * The surface is line-oriented, matching the CLI: texts passed to encode,
 * syllabify, and tokenStrings must not contain newline characters.
 */

import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

/** A core failure, with the core's error message preserved verbatim. */
export class WwhoError extends Error {
  constructor(message: string, readonly exitCode: number | null = null) {
    super(message);
    this.name = 'WwhoError';
  }
}

export interface LoadOptions {
  /** Python interpreter used to run the core (default: WWHO_PYTHON or "python3"). */
  python?: string;
  /** Rank file path when the tokenizer references a rank-file foundation. */
  rankFile?: string;
}

export type IdSpace = 'BPE' | 'SGPE';

const MAX_BUFFER = 256 * 1024 * 1024;

function assertSingleLine(text: string, what: string): void {
  if (text.includes('\n') || text.includes('\r')) {
    throw new WwhoError(`${what} is line-oriented: text must not contain newlines`);
  }
}

export class BoundTokenizer {
  private constructor(
    readonly tokenizerPath: string,
    private readonly python: string,
    private readonly rankFile: string | undefined,
    private readonly schemaPaths: string[],
  ) {}

  /**
   * Load a trained tokenizer.json. The file is probed through the core so
   * a corrupt or inconsistent artifact fails here, with the core's message.
   */
  static load(path: string, options: LoadOptions = {}): BoundTokenizer {
    const python = options.python ?? process.env.WWHO_PYTHON ?? 'python3';

    // The syllabify subcommand takes schemas, not a tokenizer; extract the
    // embedded schemas so layer-2 calls use exactly the tokenizer's own.
    let schemaPaths: string[] = [];
    try {
      const payload = JSON.parse(readFileSync(path, 'utf-8')) as {
        schemas?: Array<{ name?: string }>;
      };
      if (Array.isArray(payload.schemas)) {
        const dir = mkdtempSync(join(tmpdir(), 'wwho-schemas-'));
        schemaPaths = payload.schemas.map((schema, i) => {
          const file = join(dir, `${schema.name ?? `schema${i}`}.schema.json`);
          writeFileSync(file, JSON.stringify(schema), 'utf-8');
          return file;
        });
      }
    } catch (err) {
      throw new WwhoError(`cannot read tokenizer file ${path}: ${String(err)}`);
    }

    const bound = new BoundTokenizer(path, python, options.rankFile, schemaPaths);
    bound.run(['inspect', '--tokenizer', path, ...bound.rankFileArgs()], '');
    return bound;
  }

  private rankFileArgs(): string[] {
    return this.rankFile ? ['--rank-file', this.rankFile] : [];
  }

  private run(args: string[], input: string): string {
    const proc = spawnSync(this.python, ['-m', 'wwho', ...args], {
      input,
      encoding: 'utf-8',
      maxBuffer: MAX_BUFFER,
    });
    if (proc.error) {
      throw new WwhoError(`failed to run ${this.python}: ${proc.error.message}`);
    }
    if (proc.status !== 0) {
      throw new WwhoError(proc.stderr.trim() || `core exited ${proc.status}`, proc.status);
    }
    return proc.stdout;
  }

  private runLines(args: string[], lines: string[]): string[] {
    if (lines.length === 0) {
      return [];
    }
    const out = this.run(args, lines.join('\n') + '\n');
    const result = out.split('\n');
    if (result[result.length - 1] === '') {
      result.pop();
    }
    if (result.length !== lines.length) {
      throw new WwhoError(
        `core returned ${result.length} lines for ${lines.length} inputs`,
      );
    }
    return result;
  }

  /** Core version string; matches the Python package version. */
  version(): string {
    return this.run(['--version'], '').trim();
  }

  encode(text: string): number[] {
    assertSingleLine(text, 'encode');
    return this.encodeBatch([text])[0];
  }

  encodeBatch(lines: string[]): number[][] {
    lines.forEach((l) => assertSingleLine(l, 'encode'));
    const out = this.runLines(
      ['encode', '--tokenizer', this.tokenizerPath, ...this.rankFileArgs()],
      lines,
    );
    return out.map((line) =>
      line.trim() === '' ? [] : line.trim().split(/ +/).map(Number),
    );
  }

  decode(ids: number[]): string {
    return this.decodeBatch([ids])[0];
  }

  decodeBatch(idLines: number[][]): string[] {
    return this.runLines(
      ['decode', '--tokenizer', this.tokenizerPath, ...this.rankFileArgs()],
      idLines.map((ids) => ids.join(' ')),
    );
  }

  /** Atomic syllable strings for one line, using the tokenizer's schemas. */
  syllabify(text: string): string[] {
    return this.syllabifyBatch([text])[0];
  }

  syllabifyBatch(lines: string[]): string[][] {
    lines.forEach((l) => assertSingleLine(l, 'syllabify'));
    const schemaArgs = this.schemaPaths.flatMap((p) => ['--schema', p]);
    const out = this.runLines(['syllabify', ...schemaArgs], lines);
    return out.map((line) => JSON.parse(line) as string[]);
  }

  /** (token string, meta id) pairs for one line. */
  tokenStrings(text: string): Array<[string, number]> {
    assertSingleLine(text, 'tokenStrings');
    const out = this.runLines(
      ['encode', '--tokenizer', this.tokenizerPath, ...this.rankFileArgs(),
       '--format', 'json'],
      [text],
    );
    const triples = JSON.parse(out[0]) as Array<[string, number, IdSpace]>;
    return triples.map(([s, id]) => [s, id]);
  }

  /** Full (token string, meta id, ID space) triples for one line. */
  tokenStringsDetailed(text: string): Array<[string, number, IdSpace]> {
    assertSingleLine(text, 'tokenStrings');
    const out = this.runLines(
      ['encode', '--tokenizer', this.tokenizerPath, ...this.rankFileArgs(),
       '--format', 'json'],
      [text],
    );
    return JSON.parse(out[0]) as Array<[string, number, IdSpace]>;
  }
}

/** Convenience alias mirroring the core's loading entry point. */
export function load(path: string, options: LoadOptions = {}): BoundTokenizer {
  return BoundTokenizer.load(path, options);
}
