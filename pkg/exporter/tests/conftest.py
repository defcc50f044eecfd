import os

import pytest
import torch

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")

# words the sample corpus is built from; a few split into two pieces so the
# sub-token path is exercised
PIECES = [
    "the", "cat", "sat", "on", "mat", "dog", "ran", "fast", "plasma",
    "membrane", "bible", "king", "said", "unto", "committee", "shall",
    "convene", "walls", "garden", "stone", "water", "light", "walk",
    "##ing", "run", "##s",
]

SENTENCE_WORDS = [w for w in PIECES if not w.startswith("##")] + ["walking", "runs"]


@pytest.fixture(scope="session")
def encoder_dir(tmp_path_factory):
    from transformers import BertConfig, BertModel, BertTokenizer

    root = tmp_path_factory.mktemp("encoder")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "'"] + PIECES
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n")

    tokenizer = BertTokenizer(vocab=str(vocab_file), do_lower_case=True)
    torch.manual_seed(7)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=512,
    )
    model = BertModel(config)
    out = root / "model"
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return str(out)
