import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

WORDS = (
    "i you he she they we gave sent told baked made a an the some this to for "
    "dog cat bone letter cake story ball apple money keys man woman teacher "
    "friend children green long old small melon fork shop yesterday today . ?"
).split()


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """A tiny word-level causal LM checkpoint built locally with a fixed seed."""
    directory = tmp_path_factory.mktemp("tiny-lm")
    vocab = {"<unk>": 0, "<s>": 1, "</s>": 2, "<pad>": 3}
    for word in WORDS:
        vocab.setdefault(word, len(vocab))
    core = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    core.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=core,
        unk_token="<unk>",
        bos_token="<s>",
        eos_token="</s>",
        pad_token="<pad>",
    )
    tokenizer.save_pretrained(str(directory))
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=48,
        n_embd=32,
        n_layer=2,
        n_head=2,
        bos_token_id=1,
        eos_token_id=2,
    )
    torch.manual_seed(1234)
    model = GPT2LMHeadModel(config)
    model.save_pretrained(str(directory))
    return directory
