void f(void)
{
    goto done;
done:
    return;
}
